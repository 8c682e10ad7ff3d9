"""
Run tracking utility for vertex-nomination experiments.
Tracks which artifacts a run wrote, the seeds it derived, and the manifest
needed to replay it.
"""

import os
import json
import logging
import threading
from typing import Any, Dict, List, Set

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.10g'

def load_manifest(path: str) -> Dict[str, Any]:
    """
    Load a run manifest.

    Args:
        path: Path to a manifest.json written by RunTracker

    Returns:
        The manifest as a dictionary
    """
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except Exception as e:
        logger.error(f"Failed to load manifest from {path}: {e}")
        raise

class RunTracker:
    def __init__(self, output_dir: str, manifest_file: str = 'manifest.json'):
        """
        Initialize the run tracker.

        Args:
            output_dir: Directory receiving every artifact of the run
            manifest_file: File name of the run manifest inside output_dir
        """
        self.output_dir = output_dir
        self.manifest_file = manifest_file
        self.manifest_data: Dict[str, Any] = {"artifacts": [], "seeds": {}}
        self._lock = threading.Lock()
        self._audits_opened: Set[str] = set()
        os.makedirs(self.output_dir, exist_ok=True)

    @property
    def artifacts(self) -> List[str]:
        return list(self.manifest_data["artifacts"])

    def path_for(self, name: str) -> str:
        """
        Get the path of an artifact and record it.

        Args:
            name: File name relative to the output directory

        Returns:
            The absolute-or-relative path inside output_dir
        """
        with self._lock:
            if name not in self.manifest_data["artifacts"]:
                self.manifest_data["artifacts"].append(name)
        return os.path.join(self.output_dir, name)

    def track_seed(self, component: str, seed: int):
        """
        Record a derived seed.

        Args:
            component: Name of the consumer
            seed: The derived seed
        """
        with self._lock:
            self.manifest_data["seeds"][component] = int(seed)

    def write_table(self, name: str, frame: pd.DataFrame, sep: str = ','):
        """Write a table with a fixed float format."""
        path = self.path_for(name)
        with self._lock:
            frame.to_csv(path, index=False, sep=sep, float_format=FLOAT_FORMAT, lineterminator='\n')
        logger.debug(f"Wrote {len(frame)} rows to {path}")

    def write_json(self, name: str, data: Any):
        path = self.path_for(name)
        with self._lock:
            with open(path, 'w') as f:
                json.dump(data, f, indent=2, sort_keys=True)

    def append_audit(self, name: str, record: Dict[str, Any]):
        """
        Append one record to a JSON-lines audit file.

        The first record of a run truncates whatever an earlier run left there.

        Args:
            name: Audit file name
            record: JSON-serializable record
        """
        path = self.path_for(name)
        with self._lock:
            mode = 'a' if name in self._audits_opened else 'w'
            self._audits_opened.add(name)
            with open(path, mode) as f:
                f.write(json.dumps(record, sort_keys=True) + '\n')

    def save_manifest(self, config: Dict[str, Any], mode: str, master_seed: int, version: str):
        """
        Write the run manifest.

        Args:
            config: Effective configuration, sectioned
            mode: Experiment mode
            master_seed: Master seed of the run
            version: Toolkit version
        """
        self.manifest_data.update({
            "config": config,
            "mode": mode,
            "master_seed": int(master_seed),
            "version": version,
        })
        path = os.path.join(self.output_dir, self.manifest_file)
        try:
            with self._lock:
                with open(path, 'w') as f:
                    json.dump(self.manifest_data, f, indent=2, sort_keys=True)
            logger.info(f"Wrote run manifest to {path}")
        except Exception as e:
            logger.error(f"Failed to save manifest: {e}")
            raise

    def discard(self):
        """Remove every artifact written so far, including the manifest."""
        names = self.artifacts + [self.manifest_file]
        with self._lock:
            for name in names:
                path = os.path.join(self.output_dir, name)
                if os.path.exists(path):
                    os.remove(path)
                    logger.debug(f"Removed partial output {path}")
            self.manifest_data = {"artifacts": [], "seeds": {}}
            self._audits_opened.clear()
