"""
Unit tests for the command-line controller.
"""
import json

import pytest

from app.controller.cli_controller import (
    EXIT_DISCREPANCY,
    EXIT_OK,
    EXIT_THEOREM_FAILURE,
    EXIT_USAGE,
    run,
)
from app.models.residue import Residue
from app.service.powersum import s_exact
from app.shared.config import Settings
from app.shared.errors import ZeroSumError


def _run(argv, settings, capsys):
    code = run(argv, settings)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCompute:
    """Test cases for the compute command."""

    def test_square_sum(self, test_settings, capsys):
        code, out, _ = _run(["compute", "--n", "5", "--p", "5"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "-7100 - 7100i\n"

    def test_modular(self, test_settings, capsys):
        code, out, _ = _run(["compute", "--n", "1", "--p", "7", "--mod-power", "2"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "re=28 im=28 (mod 49)\n"

    def test_rectangle(self, test_settings, capsys):
        code, out, _ = _run(["compute", "--n", "0", "--k", "3", "--m", "4"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "12 + 0i\n"

    def test_missing_p(self, test_settings, capsys):
        code, out, err = _run(["compute", "--n", "5"], test_settings, capsys)
        assert code == EXIT_USAGE
        assert out == ""
        assert err

    def test_non_prime(self, test_settings, capsys):
        code, _, err = _run(["compute", "--n", "2", "--p", "9"], test_settings, capsys)
        assert code == EXIT_USAGE
        assert "p=9" in err

    def test_bad_modulus_power(self, test_settings, capsys):
        code, _, _ = _run(["compute", "--n", "2", "--p", "7", "--mod-power", "0"], test_settings, capsys)
        assert code == EXIT_USAGE


class TestValuation:
    """Test cases for the valuation command."""

    def test_value(self, test_settings, capsys):
        code, out, _ = _run(["valuation", "--n", "5", "--p", "5"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "2\n"

    def test_zero_sum(self, test_settings, capsys, mocker):
        mocker.patch("app.controller.cli_controller.vp_g", side_effect=ZeroSumError("zero"))
        code, _, err = _run(["valuation", "--n", "5", "--p", "5"], test_settings, capsys)
        assert code == EXIT_THEOREM_FAILURE
        assert "G_5(5) = 0" in err


class TestBernoulli:
    """Test cases for the bernoulli command."""

    def test_exact(self, test_settings, capsys):
        code, out, _ = _run(["bernoulli", "--n", "12"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "-691/2730\n"

    def test_residue(self, test_settings, capsys):
        # B_4 = -1/30 and 30 * 18 ≡ 1 (mod 49)
        code, out, _ = _run(["bernoulli", "--n", "4", "--p", "7", "--mod-power", "2"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == "31 (mod 49)\n"

    def test_p_divides_denominator(self, test_settings, capsys):
        code, _, _ = _run(["bernoulli", "--n", "6", "--p", "7", "--mod-power", "1"], test_settings, capsys)
        assert code == EXIT_USAGE

    def test_p_without_power(self, test_settings, capsys):
        code, _, _ = _run(["bernoulli", "--n", "6", "--p", "7"], test_settings, capsys)
        assert code == EXIT_USAGE


class TestVerify:
    """Test cases for the verify command."""

    def test_split_range(self, test_settings, capsys):
        code, out, _ = _run(["verify", "--which", "theorem1", "--p-max", "97"], test_settings, capsys)
        assert code == EXIT_OK
        assert out.strip().endswith("11 primes checked, all pass")

    @pytest.mark.slow
    def test_split_acceptance(self, test_settings, capsys):
        code, out, _ = _run(["verify", "--which", "theorem1", "--p-max", "997"], test_settings, capsys)
        assert code == EXIT_OK
        assert out.strip().endswith("80 primes checked, all pass")

    def test_inert_p3_is_out_of_domain(self, test_settings, capsys):
        code, out, err = _run(["verify", "--which", "theorem2", "--p", "3"], test_settings, capsys)
        assert code == EXIT_USAGE
        assert out == ""
        assert "p=3" in err

    def test_dichotomy(self, test_settings, capsys):
        code, out, _ = _run(["verify", "--which", "dichotomy", "--p", "13"], test_settings, capsys)
        assert code == EXIT_OK
        assert "1 primes checked, all pass" in out

    def test_perturbed_congruence_exits_one(self, test_settings, capsys, mocker):
        mocker.patch(
            "app.service.verify.s_mod",
            side_effect=lambda r, n, modulus: Residue.of(s_exact(r, n) + 1, modulus),
        )
        code, out, _ = _run(["verify", "--which", "endpoint", "--p", "7", "--no-cache"], test_settings, capsys)
        assert code == EXIT_THEOREM_FAILURE
        assert "FAIL p=7" in out
        assert "failed" in out

    def test_json_to_file(self, test_settings, capsys, tmp_path):
        out_path = tmp_path / "reports" / "dichotomy.json"
        code, out, _ = _run(
            ["verify", "--which", "dichotomy", "--p", "7", "--format", "json", "--out", str(out_path)],
            test_settings,
            capsys,
        )
        assert code == EXIT_OK
        assert out == ""
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["schema"] == "v1"
        assert data["command"] == "verify"
        assert data["params"] == {"p": 7, "which": "dichotomy", "slow": False}
        assert data["summary"]["failed"] == 0
        assert all(r["pass"] for r in data["records"])

    def test_missing_which(self, test_settings):
        with pytest.raises(SystemExit) as exc_info:
            run(["verify", "--p", "7"], test_settings)
        assert exc_info.value.code == EXIT_USAGE

    def test_empty_range(self, test_settings, capsys):
        code, _, _ = _run(["verify", "--which", "theorem2", "--p-max", "5"], test_settings, capsys)
        assert code == EXIT_USAGE


class TestScan:
    """Test cases for the scan command."""

    def test_mod4_csv(self, test_settings, capsys):
        code, out, _ = _run(["scan", "--which", "mod4", "--p", "7", "--format", "csv"], test_settings, capsys)
        assert code == EXIT_OK
        assert out == (
            "p,n,observed,predicted,discrepancy\n"
            "7,1,1,1,0\n"
            "7,2,2,2,0\n"
            "7,3,3,3,0\n"
            "7,4,1,1,0\n"
            "7,5,2,2,0\n"
        )

    def test_mod4_irregular_prime(self, test_settings, capsys):
        code, _, _ = _run(["scan", "--which", "mod4", "--p", "37"], test_settings, capsys)
        assert code == EXIT_DISCREPANCY

    def test_mod4_small_prime(self, test_settings, capsys):
        code, _, _ = _run(["scan", "--which", "mod4", "--p", "5"], test_settings, capsys)
        assert code == EXIT_USAGE

    def test_blocks_json(self, test_settings, capsys):
        code, out, _ = _run(["scan", "--which", "blocks", "--p-max", "110", "--format", "json"], test_settings, capsys)
        assert code == EXIT_OK
        data = json.loads(out)
        assert [(r["p"], r["t"]) for r in data["records"]] == [(37, 8), (59, 11), (101, 17), (103, 6)]
        assert all(r["irregular_confirmed"] for r in data["records"])
        assert data["summary"] == {"checked": 4, "passed": 4, "failed": 0}

    def test_p3p5(self, test_settings, capsys):
        code, out, _ = _run(["scan", "--which", "p3p5", "--p", "5", "--n-max", "200"], test_settings, capsys)
        assert code == EXIT_OK
        assert "discrepancy=0" in out

    @pytest.mark.slow
    def test_p3p5_acceptance(self, test_settings, capsys):
        code, _, _ = _run(["scan", "--which", "p3p5", "--p", "5", "--n-max", "2000"], test_settings, capsys)
        assert code == EXIT_OK

    def test_p3p5_rejects_other_primes(self, test_settings, capsys):
        code, _, _ = _run(["scan", "--which", "p3p5", "--p", "7"], test_settings, capsys)
        assert code == EXIT_USAGE

    def test_large_range_requires_slow(self, test_settings, capsys):
        code, _, err = _run(["scan", "--which", "blocks", "--p-max", "3000"], test_settings, capsys)
        assert code == EXIT_USAGE
        assert "--slow" in err

    def test_thread_count_does_not_change_output(self, test_settings, capsys):
        argv = ["scan", "--which", "mod4", "--p-max", "60", "--format", "json", "--no-cache"]
        _, single, _ = _run(argv + ["--threads", "1"], test_settings, capsys)
        _, pooled, _ = _run(argv + ["--threads", "4"], test_settings, capsys)
        assert single == pooled
        assert json.loads(single)["params"] == {"p_max": 60, "which": "mod4", "slow": False}

    def test_odd_multiples_deviation_exits_three(self, test_settings, capsys):
        code, out, _ = _run(
            ["scan", "--which", "odd-multiples", "--p", "11", "--m-max", "10", "--format", "csv"],
            test_settings,
            capsys,
        )
        assert code == EXIT_DISCREPANCY
        assert "11,90,4,3,1\n" in out


class TestCachedPool:
    """Test cases for multi-process runs on a fresh STable cache."""

    @pytest.mark.parametrize("attempt", range(3))
    def test_scan_on_fresh_cache(self, tmp_path, capsys, attempt):
        settings = Settings(
            cache_dir=tmp_path / f"fresh-{attempt}", log_level="WARNING", threads=8, valuation_ceiling=64
        )
        code, out, err = _run(["scan", "--which", "mod4", "--p-max", "60", "--format", "csv"], settings, capsys)
        assert code == EXIT_OK, err
        assert out.startswith("p,n,observed,predicted,discrepancy\n")
        assert (settings.cache_dir / "stables.sqlite3").exists()

    def test_verify_on_fresh_cache(self, tmp_path, test_settings, capsys):
        argv = ["verify", "--which", "theorem1", "--p-max", "97", "--threads", "4", "--cache-dir", str(tmp_path / "c")]
        code, out, err = _run(argv, test_settings, capsys)
        assert code == EXIT_OK, err
        assert "11 primes checked, all pass" in out

    def test_schema_is_created_before_workers(self, test_settings, capsys, mocker):
        prepare = mocker.patch("app.service.verify.prepare_cache")
        run_per_prime = mocker.patch("app.service.verify.run_per_prime", return_value=[([], [])])
        code, _, _ = _run(["scan", "--which", "anomalies", "--p-max", "7", "--threads", "4"], test_settings, capsys)
        assert code == EXIT_OK
        prepare.assert_called_once_with(test_settings.cache_dir)
        run_per_prime.assert_called_once()
