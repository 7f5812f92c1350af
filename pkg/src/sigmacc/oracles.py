"""Decomposition oracles: classifiers claiming a bounded chain condition per class.

An oracle has ``class_count``, ``bounds`` (class ``i`` is claimed to have no
antichain of size ``bounds[i]``) and ``classify(condition) -> int``.

Oracles can also live in another process and speak a line protocol::

    engine -> oracle   HELLO
    oracle -> engine   CLASSES <N> <b_0> ... <b_{N-1}>
    engine -> oracle   CLASSIFY <condition-text>
    oracle -> engine   CLASS <i>
    engine -> oracle   BYE           (oracle exits 0)
"""

from __future__ import annotations

import hashlib
import shlex
import subprocess
import sys
from typing import Sequence, TextIO

from sigmacc.conditions import Condition, format_condition, parse_condition
from sigmacc.errors import InvalidParams, OracleViolation
from sigmacc.partition import signature


class Oracle:
    class_count: int
    bounds: tuple

    def classify(self, F: Condition) -> int:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _check_bounds(bounds: Sequence[int], count: int) -> tuple:
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != count:
        raise InvalidParams(f"expected {count} bounds, got {len(bounds)}")
    if any(b < 2 for b in bounds):
        raise InvalidParams("every claimed bound must be at least 2")
    return bounds


class ConstantOracle(Oracle):
    """Everything in one class."""

    def __init__(self, bounds=(6,)):
        self.class_count = 1
        self.bounds = _check_bounds(bounds, 1)

    def classify(self, F):
        return 0


class SignatureOracle(Oracle):
    """Class = a signature component (or their sum) modulo ``len(bounds)``."""

    COMPONENTS = ("k", "n", "m", "sum")

    def __init__(self, component: str, bounds=(4, 4)):
        if component not in self.COMPONENTS:
            raise InvalidParams(f"unknown signature component {component!r}")
        self.component = component
        self.class_count = len(bounds)
        self.bounds = _check_bounds(bounds, self.class_count)

    def classify(self, F):
        sig = signature(F)
        value = sum(sig) if self.component == "sum" else getattr(sig, self.component)
        return value % self.class_count


class RandomOracle(Oracle):
    """Seeded pseudo-random classes, a pure function of the canonical text."""

    def __init__(self, bounds=(4, 4), seed: int = 0):
        self.class_count = len(bounds)
        self.bounds = _check_bounds(bounds, self.class_count)
        self.seed = seed

    def classify(self, F):
        digest = hashlib.sha256(f"{self.seed}|{format_condition(F)}".encode()).digest()
        return int.from_bytes(digest[:8], "big") % self.class_count


BUILTINS = {
    "constant": lambda bounds, seed: ConstantOracle(bounds or (6,)),
    "k-mod": lambda bounds, seed: SignatureOracle("k", bounds or (4, 4)),
    "n-mod": lambda bounds, seed: SignatureOracle("n", bounds or (4, 4)),
    "m-mod": lambda bounds, seed: SignatureOracle("m", bounds or (4, 4)),
    "sig-mod": lambda bounds, seed: SignatureOracle("sum", bounds or (4, 4)),
    "random": lambda bounds, seed: RandomOracle(bounds or (4, 4), seed),
}


def builtin_oracle(name: str, bounds: Sequence[int] | None = None, seed: int = 0) -> Oracle:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise InvalidParams(f"unknown builtin oracle {name!r}; choose from {', '.join(BUILTINS)}") from None
    return factory(tuple(bounds) if bounds else None, seed)


class SubprocessOracle(Oracle):
    """Client side of the line protocol; the oracle runs as a child process."""

    def __init__(self, command: str | Sequence[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )
        reply = self._ask("HELLO")
        parts = reply.split()
        try:
            if parts[0] != "CLASSES":
                raise ValueError
            count = int(parts[1])
            bounds = tuple(int(x) for x in parts[2:])
        except (IndexError, ValueError):
            self.close()
            raise OracleViolation(f"malformed handshake reply {reply!r}") from None
        if count < 1 or len(bounds) != count or any(b < 2 for b in bounds):
            self.close()
            raise OracleViolation(f"inconsistent handshake reply {reply!r}")
        self.class_count = count
        self.bounds = bounds

    def _ask(self, line: str) -> str:
        if self.proc.poll() is not None:
            raise OracleViolation("oracle process exited")
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except BrokenPipeError:
            raise OracleViolation("oracle process closed its input") from None
        reply = self.proc.stdout.readline()
        if not reply:
            raise OracleViolation(f"no reply to {line.split()[0]}")
        return reply.strip()

    def classify(self, F):
        reply = self._ask("CLASSIFY " + format_condition(F))
        parts = reply.split()
        if len(parts) != 2 or parts[0] != "CLASS" or not parts[1].isdigit():
            raise OracleViolation(f"malformed reply {reply!r}")
        return int(parts[1])

    def close(self):
        if self.proc.poll() is None:
            try:
                self.proc.stdin.write("BYE\n")
                self.proc.stdin.flush()
                self.proc.stdin.close()
            except (BrokenPipeError, OSError):
                pass
            try:
                self.proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()
        if self.proc.stdout:
            self.proc.stdout.close()


def serve(oracle: Oracle, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> int:
    """Answer protocol requests for ``oracle`` until ``BYE`` or end of input."""
    for line in stdin:
        cmd, _, arg = line.strip().partition(" ")
        if cmd == "HELLO":
            out = "CLASSES " + " ".join(str(x) for x in (oracle.class_count,) + tuple(oracle.bounds))
        elif cmd == "CLASSIFY":
            out = f"CLASS {oracle.classify(parse_condition(arg))}"
        elif cmd == "BYE":
            return 0
        else:
            out = "ERROR unknown command"
        stdout.write(out + "\n")
        stdout.flush()
    return 0


def open_oracle(source: str, bounds: Sequence[int] | None = None, seed: int = 0) -> Oracle:
    """``builtin:<name>`` or ``exec:<command line>``."""
    kind, _, rest = source.partition(":")
    if kind == "builtin":
        return builtin_oracle(rest, bounds, seed)
    if kind == "exec":
        if not rest:
            raise InvalidParams("exec: oracle needs a command")
        return SubprocessOracle(rest)
    raise InvalidParams(f"oracle must be builtin:<name> or exec:<command>, got {source!r}")
