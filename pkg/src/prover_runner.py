"""
Runs an external first-order prover on an exported TPTP file and reads the
SZS status line it prints.
"""
from __future__ import annotations

import logging
import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from typing import Optional

from modules.errors import ProverError

logger = logging.getLogger(__name__)

_SZS_STATUS = re.compile(r"SZS status (\w+)")

THEOREM = "Theorem"
PROVED = {THEOREM, "Unsatisfiable", "ContradictoryAxioms"}
REFUTED = {"CounterSatisfiable", "Satisfiable"}


@dataclass
class ProverResult:
    status: str
    output: str

    @property
    def exit_code(self) -> int:
        if self.status in PROVED:
            return 0
        if self.status in REFUTED:
            return 1
        return 4


def parse_szs_status(output: str) -> str:
    m = _SZS_STATUS.search(output)
    return m.group(1) if m else "Unknown"


class ProverRunner:
    """`template` is a shell-style command with a {file} placeholder,
    e.g. "vampire --mode casc {file}"."""

    def __init__(self, template: str, timeout: float = 30):
        if "{file}" not in template:
            raise ProverError(f"prover template has no {{file}} placeholder: {template}")
        self.template = template
        self.timeout = timeout

    def run_file(self, path: str) -> ProverResult:
        cmd = shlex.split(self.template.format(file=path))
        logger.debug("running prover: %s", " ".join(cmd))
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True, timeout=self.timeout)
        except FileNotFoundError as e:
            raise ProverError(f"prover not found: {cmd[0]}") from e
        except subprocess.TimeoutExpired as e:
            logger.warning("prover timed out after %s s", self.timeout)
            return ProverResult("Timeout", e.stdout if isinstance(e.stdout, str) else "")
        status = parse_szs_status(proc.stdout + proc.stderr)
        logger.info("prover status %s (exit %d)", status, proc.returncode)
        return ProverResult(status, proc.stdout)

    def run(self, problem_text: str, keep: Optional[str] = None) -> ProverResult:
        """Write the problem to `keep` (or a temporary file) and run on it"""
        if keep:
            with open(keep, "w", encoding="utf-8") as f:
                f.write(problem_text)
            return self.run_file(keep)
        fd, path = tempfile.mkstemp(suffix=".p", prefix="folf_")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(problem_text)
            return self.run_file(path)
        finally:
            os.unlink(path)
