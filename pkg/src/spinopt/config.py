"""Central tolerance record.

Defaults live in :data:`DEFAULT`. Overrides are scoped with
:func:`use_tolerances`, which is backed by a context variable so concurrent
callers never see each other's settings.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10       # structure checks on inputs (relative to max(1, |M|_F))
    unitary: float = 1e-10
    symmetric: float = 1e-9
    jacobi_off: float = 1e-14      # relative off-diagonal Frobenius mass that ends a sweep loop
    jacobi_max_sweeps: int = 60
    degenerate_gap: float = 1e-8   # eigenvalue clusters re-orthonormalized below this gap
    cluster_refine: float = 1e-5   # commuting-pair refinement window
    branch: float = 1e-9           # distance of an eigenphase to pi that counts as ambiguous
    cell: float = 1e-9             # cell inequality slack
    generic: float = 1e-9          # |alpha(H_d)| threshold for genericity
    orbit_dedup: float = 1e-9
    lp_feas: float = 1e-10         # basic solution feasibility slack
    lie_rank: float = 1e-9         # singular value cutoff in Lie closure

    def replace(self, **kw) -> "Tolerances":
        for key in kw:
            if key not in self.names():
                raise KeyError(f"unknown tolerance {key!r}")
        return dataclasses.replace(self, **kw)

    @classmethod
    def names(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def with_overrides(self, items) -> "Tolerances":
        """Apply ``name=value`` strings."""
        kw = {}
        for item in items:
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"expected name=value, got {item!r}")
            key = key.strip()
            if key not in self.names():
                raise KeyError(f"unknown tolerance {key!r}")
            num = int(val) if key == "jacobi_max_sweeps" else float(val)
            if num <= 0:
                raise ValueError(f"tolerance {key} must be positive")
            kw[key] = num
        return self.replace(**kw)


DEFAULT = Tolerances()
_current = contextvars.ContextVar("spinopt_tolerances", default=DEFAULT)


def tol() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def use_tolerances(t: Tolerances):
    token = _current.set(t)
    try:
        yield t
    finally:
        _current.reset(token)
