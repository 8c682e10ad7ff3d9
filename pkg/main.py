#!/usr/bin/env python3
"""
Main entry point for the vertex-nomination toolkit.
"""

import argparse
import logging
import traceback

from dotenv import load_dotenv

from config import ConfigManager
from experiments import ExperimentManager
from utils.tracking import RunTracker

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

VERB_MODES = {
    'simulate': 'simulate',
    'eval': 'real-data',
    'trim-sweep': 'sweep',
    'oracle': 'oracle',
    'nominate': 'nominate',
}

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Vertex nomination across graph pairs')
    verbs = parser.add_subparsers(dest='verb', required=True)
    for verb, mode in VERB_MODES.items():
        sub = verbs.add_parser(verb, help=f"Run in {mode} mode")
        source = sub.add_mutually_exclusive_group()
        source.add_argument('--config', help='Path to an .ini/.cfg or .json config file')
        source.add_argument('--manifest', help='Replay the configuration of a prior run')
        sub.add_argument('--set', dest='overrides', action='append', default=[], metavar='SECTION.KEY=VALUE',
                         help='Override one config key (repeatable)')
        sub.add_argument('--output-dir', help='Directory receiving every artifact')
        sub.add_argument('--debug', action='store_true', help='Enable debug logging')
    return parser

def main(argv=None):
    """Main entry point for the toolkit."""
    load_dotenv()
    args = build_parser().parse_args(argv)

    # Set debug logging if requested
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.debug("Debug logging enabled")

    try:
        if args.manifest:
            config_manager = ConfigManager.from_manifest(args.manifest)
        else:
            config_manager = ConfigManager(args.config)
        overrides = [f"run.mode={VERB_MODES[args.verb]}"] + list(args.overrides)
        if args.output_dir:
            overrides.append(f"run.output_dir={args.output_dir}")
        config_manager.apply_overrides(overrides)
        config = config_manager.build_experiment_config()

        manager = ExperimentManager(config, RunTracker(config.output_dir))
        return manager.run_experiment()

    except KeyboardInterrupt:
        logger.info("Run stopped by user")
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        logger.debug(f"Traceback: {traceback.format_exc()}")
        return 1

    return 1

if __name__ == '__main__':
    exit(main())
