"""Kernel selection: compiled extension when available, pure Python otherwise.

Set the environment variable ``SEMGREX_PURE_PYTHON=1`` (before import) or
call :func:`set_backend` to force a particular backend.
"""

from __future__ import annotations

import os

from . import pybackend

# Operator name -> code, shared by both backends.
OPCODES = {
    "<": pybackend.OP_DEP,
    ">": pybackend.OP_GOV,
    "<<": pybackend.OP_DESC,
    ">>": pybackend.OP_ANC,
    ".": pybackend.OP_NEXT,
    "..": pybackend.OP_BEFORE,
    "-": pybackend.OP_PREV,
    "--": pybackend.OP_AFTER,
    "$+": pybackend.OP_SIB_NEXT,
    "$-": pybackend.OP_SIB_PREV,
    "$++": pybackend.OP_SIB_BEFORE,
    "$--": pybackend.OP_SIB_AFTER,
    ">++": pybackend.OP_GOV_RIGHT,
    ">--": pybackend.OP_GOV_LEFT,
    "<++": pybackend.OP_DEP_RIGHT,
    "<--": pybackend.OP_DEP_LEFT,
}

try:
    from . import _ckernel
except ImportError:
    _ckernel = None

_BACKENDS = {"pure": pybackend.GraphCore}
if _ckernel is not None:
    _BACKENDS["compiled"] = _ckernel.GraphCore

if os.environ.get("SEMGREX_PURE_PYTHON"):
    _current = "pure"
else:
    _current = "compiled" if _ckernel is not None else "pure"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def backend_name() -> str:
    return _current


def set_backend(name: str) -> None:
    global _current
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _current = name


def core_class():
    return _BACKENDS[_current]
