"""Register-size caps.

All caps can be overridden at once through the ``FINITE_MAX_QUBITS``
environment variable; it is read on every call so tests can monkeypatch it.
"""
import os

from .errors import ResourceError

DEFAULT_SYSTEM_CAP = 20
DEFAULT_ENUMERATION_CAP = 24
DEFAULT_JOINT_CAP = 26


def _override():
    raw = os.environ.get("FINITE_MAX_QUBITS")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ResourceError(f"FINITE_MAX_QUBITS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ResourceError("FINITE_MAX_QUBITS must be positive")
    return value


def system_cap() -> int:
    return _override() or DEFAULT_SYSTEM_CAP


def enumeration_cap() -> int:
    return _override() or DEFAULT_ENUMERATION_CAP


def joint_cap() -> int:
    return _override() or DEFAULT_JOINT_CAP


def check(qubits: int, cap: int, what: str) -> None:
    if qubits > cap:
        raise ResourceError(
            f"{what} needs {qubits} qubits but the cap is {cap} "
            "(set FINITE_MAX_QUBITS to raise it)"
        )
