import logging
import sys
from typing import Optional, Sequence

from app.controller.cli_controller import build_parser, dispatch
from app.shared.config import get_settings

LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    args = build_parser(settings).parse_args(argv)
    configure_logging(args.log_level)
    return dispatch(args, settings)


if __name__ == "__main__":
    sys.exit(main())
