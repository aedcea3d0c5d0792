""" The `schrodloc` command line

Exit codes: 0 on success, 1 on a numerical failure or a failed check, 2 on a configuration or artifact error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import abc
from typing import Optional

from schrodloc import exc

from .commands import COMMANDS
from .config import load_config, parse_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='schrodloc', description='Numerical laboratory of a localization counterexample '
                                                                   'for Schrödinger means')
    parser.add_argument('command', choices=sorted(COMMANDS), help='what to run')
    parser.add_argument('--config', metavar='PATH', help='a `key = value` config file; defaults when omitted')
    parser.add_argument('--out', metavar='DIR', help='output directory')
    parser.add_argument('--seed', type=int, help='seed of the sample streams')
    parser.add_argument('--stages', metavar='LIST', help='comma-separated schedule stages to search and certify')
    parser.add_argument('--override-v', metavar='LIST', help='comma-separated explicit v_1, v_2, ...')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    return parser


def main(argv: Optional[abc.Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    try:
        config = load_config(args.config, _overrides(args))
        logger.info(f'Config hash: {config.content_hash()}')
        return COMMANDS[args.command](config)
    except (exc.InvalidParameterError, exc.ArtifactError) as e:
        # ConfigError included
        print(f'schrodloc: {e}', file=sys.stderr)
        return EXIT_CONFIG
    except exc.NumericalError as e:
        print(f'schrodloc: {e.where} failed: {e}', file=sys.stderr)
        return EXIT_NUMERICAL


def _overrides(args: argparse.Namespace) -> dict[str, object]:
    overrides: dict[str, object] = {}
    if args.out is not None:
        overrides['out'] = args.out
    if args.seed is not None:
        overrides['seed'] = args.seed
    if args.stages is not None:
        overrides['stages'] = parse_list('stages', args.stages)
    if args.override_v is not None:
        overrides['v'] = parse_list('v', args.override_v)
    return overrides


if __name__ == '__main__':
    sys.exit(main())
