"""Run manifests: what was run, with which settings, and what it wrote."""

import os
import platform
import sys
import time

from . import __version__
from .io import file_digest, write_json


class RunManifest:
    """Collects outputs of one command and writes ``<stem>.manifest.json``.

    Output digests are sha256 of the file bytes; replaying the recorded
    command line must reproduce them.
    """

    def __init__(self, command, argv, config, seed=None):
        self.command = command
        self.argv = list(argv)
        self.config = dict(config)
        self.seed = seed
        self.outputs = {}
        self.notes = {}
        self.status = "ok"
        self.exit_code = 0
        self.error = None
        self._t0 = time.perf_counter()

    def add_output(self, path):
        self.outputs[os.path.basename(path)] = file_digest(path)

    def fail(self, exc, exit_code):
        self.status = "error"
        self.exit_code = exit_code
        self.error = f"{type(exc).__name__}: {exc}"

    def as_dict(self):
        return {
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "seed": self.seed,
            "tool_version": __version__,
            "python": sys.version.split()[0],
            "platform": platform.platform(),
            "wall_time_s": round(time.perf_counter() - self._t0, 6),
            "outputs": self.outputs,
            "notes": self.notes,
            "status": self.status,
            "exit_code": self.exit_code,
            "error": self.error,
        }

    def write(self, path):
        write_json(path, self.as_dict())
        return path
