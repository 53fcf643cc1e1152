"""
Exact state-vector evolution of the Hadamard walk on the integer line.

A walker state is stored as two dense complex arrays, ``a`` (coin |R>) and
``b`` (coin |L>), over a contiguous window of positions ``[x_min, x_max]``.
One step applies the Hadamard coin at every site and then moves the |R>
component one site to the right and the |L> component one site to the left.

Example
-------
>>> state = make_initial(SymmetricPair(k=1, sign=+1), t_max=1000)
>>> final = evolve(state, 1000)
>>> final.t
1000
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Union

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "NormalizationError",
    "SiteAmplitudes",
    "WalkState",
    "Localized",
    "SymmetricPair",
    "Custom",
    "InitialCondition",
    "hadamard",
    "make_initial",
    "step",
    "evolve",
    "trajectory",
]

NORM_TOL = 1e-12
_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class NormalizationError(ValueError):
    """Raised when an initial condition does not have unit norm."""


class SiteAmplitudes(NamedTuple):
    """Coin amplitudes ``(a, b)`` for |R> and |L> at a single site."""

    a: complex
    b: complex


def hadamard(spinor: SiteAmplitudes) -> SiteAmplitudes:
    """Apply the Hadamard coin: ``(a, b) -> ((a + b)/√2, (a - b)/√2)``."""
    a, b = spinor
    return SiteAmplitudes(complex((a + b) * _INV_SQRT2), complex((a - b) * _INV_SQRT2))


@dataclass(frozen=True, eq=False)
class WalkState:
    """
    Immutable snapshot of the walker after ``t`` steps.

    Attributes
    ----------
    a, b : NDArray[np.complex128]
        Amplitudes for coin |R> and |L>; index ``i`` is position ``x_min + i``.
    x_min : int
        Position of the first array cell.
    t : int
        Number of steps taken since the initial condition.
    """

    a: NDArray[np.complex128]
    b: NDArray[np.complex128]
    x_min: int
    t: int = 0

    def __post_init__(self):
        a = np.array(self.a, dtype=np.complex128)
        b = np.array(self.b, dtype=np.complex128)
        if a.ndim != 1 or a.shape != b.shape or a.size == 0:
            raise ValueError("a and b must be non-empty 1-D arrays of equal length")
        if self.t < 0:
            raise ValueError(f"t must be non-negative (got {self.t})")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "x_min", int(self.x_min))
        object.__setattr__(self, "t", int(self.t))

    @property
    def x_max(self) -> int:
        return self.x_min + self.a.size - 1

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_max + 1, dtype=np.int64)

    def norm(self) -> float:
        """Total probability ``Σ |a_x|² + |b_x|²``."""
        return float(np.sum(self.a.real**2 + self.a.imag**2 + self.b.real**2 + self.b.imag**2))

    def amplitude(self, x: int) -> SiteAmplitudes:
        """Coin amplitudes at position ``x`` (zero outside the stored window)."""
        i = x - self.x_min
        if 0 <= i < self.a.size:
            return SiteAmplitudes(complex(self.a[i]), complex(self.b[i]))
        return SiteAmplitudes(0j, 0j)

    def support(self) -> tuple[int, int] | None:
        """Smallest ``(lo, hi)`` holding every nonzero amplitude, or None if empty."""
        nz = np.flatnonzero((self.a != 0) | (self.b != 0))
        if nz.size == 0:
            return None
        return self.x_min + int(nz[0]), self.x_min + int(nz[-1])

    def window(self, lo: int, hi: int) -> "WalkState":
        """Re-embed the state in the window ``[lo, hi]``; must not cut off amplitude."""
        sup = self.support()
        if sup is not None and (sup[0] < lo or sup[1] > hi):
            raise ValueError(f"window [{lo}, {hi}] does not contain support {sup}")
        a = np.zeros(hi - lo + 1, dtype=np.complex128)
        b = np.zeros_like(a)
        src_lo, src_hi = max(lo, self.x_min), min(hi, self.x_max)
        if src_lo <= src_hi:
            a[src_lo - lo : src_hi - lo + 1] = self.a[src_lo - self.x_min : src_hi - self.x_min + 1]
            b[src_lo - lo : src_hi - lo + 1] = self.b[src_lo - self.x_min : src_hi - self.x_min + 1]
        return WalkState(a, b, lo, self.t)


@dataclass(frozen=True)
class Localized:
    """Walker at x = 0 with coin state ``alpha|R> + beta|L>``."""

    alpha: complex = 1j * _INV_SQRT2
    beta: complex = _INV_SQRT2


@dataclass(frozen=True)
class SymmetricPair:
    """``½(|L> + i|R>) ⊗ (|-k> + sign·|k>)`` with ``k ≥ 1`` and ``sign = ±1``."""

    k: int = 1
    sign: int = +1


@dataclass(frozen=True)
class Custom:
    """Arbitrary finite state given as ``(x, a, b)`` triples."""

    entries: tuple[tuple[int, complex, complex], ...]

    def __init__(self, entries: Sequence[tuple[int, complex, complex]]):
        object.__setattr__(
            self, "entries", tuple((int(x), complex(a), complex(b)) for x, a, b in entries)
        )


InitialCondition = Union[Localized, SymmetricPair, Custom]


def initial_sites(cond: InitialCondition) -> list[tuple[int, complex, complex]]:
    """
    Validate ``cond`` and return its occupied sites as ``(x, a, b)`` triples.

    Raises
    ------
    NormalizationError
        If the amplitudes do not sum to unit norm within 1e-12.
    ValueError
        For a pair with ``k < 1`` or ``sign`` not in {+1, -1}, or duplicate
        custom sites.
    """
    if isinstance(cond, Localized):
        sites = [(0, complex(cond.alpha), complex(cond.beta))]
    elif isinstance(cond, SymmetricPair):
        if int(cond.k) != cond.k or cond.k < 1:
            raise ValueError(f"pair separation k must be a positive integer (got {cond.k})")
        if cond.sign not in (1, -1):
            raise ValueError(f"pair sign must be +1 or -1 (got {cond.sign})")
        k = int(cond.k)
        # coin factor ½(|L> + i|R>): a = i/2, b = 1/2
        sites = [(-k, 0.5j, 0.5 + 0j), (k, cond.sign * 0.5j, cond.sign * 0.5 + 0j)]
    elif isinstance(cond, Custom):
        if not cond.entries:
            raise NormalizationError("custom initial condition has no entries")
        xs = [x for x, _, _ in cond.entries]
        if len(set(xs)) != len(xs):
            raise ValueError("custom initial condition lists a site more than once")
        sites = list(cond.entries)
    else:
        raise TypeError(f"unsupported initial condition {cond!r}")

    norm = sum(abs(a) ** 2 + abs(b) ** 2 for _, a, b in sites)
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"initial state has norm {norm!r}, expected 1")
    return sites


def make_initial(cond: InitialCondition, t_max: int = 0) -> WalkState:
    """
    Build the t = 0 state for ``cond``.

    The array is preallocated to cover the light cone of ``t_max`` steps, so
    evolving up to ``t_max`` never reallocates. Evolving further still works;
    the window is grown on demand.
    """
    if t_max < 0:
        raise ValueError(f"t_max must be non-negative (got {t_max})")
    sites = initial_sites(cond)
    if isinstance(cond, SymmetricPair):
        lo, hi = -cond.k, cond.k
    else:
        xs = [x for x, _, _ in sites]
        lo, hi = min(min(xs), -max(xs)), max(max(xs), -min(xs))
    x_min = lo - t_max
    a = np.zeros(hi - lo + 2 * t_max + 1, dtype=np.complex128)
    b = np.zeros_like(a)
    for x, amp_a, amp_b in sites:
        a[x - x_min] = amp_a
        b[x - x_min] = amp_b
    return WalkState(a, b, x_min, 0)


def _edges_clear(a: NDArray, b: NDArray) -> bool:
    return a[0] == 0 and b[0] == 0 and a[-1] == 0 and b[-1] == 0


def _grow(a: NDArray, b: NDArray, x_min: int):
    pad = max(16, a.size // 2)
    a = np.pad(a, pad)
    b = np.pad(b, pad)
    return a, b, x_min - pad


def _step_into(a: NDArray, b: NDArray, out_a: NDArray, out_b: NDArray) -> None:
    # caller guarantees the edge cells are zero, so nothing is shifted out
    out_a[0] = 0
    np.add(a[:-1], b[:-1], out=out_a[1:])
    out_a[1:] *= _INV_SQRT2
    out_b[-1] = 0
    np.subtract(a[1:], b[1:], out=out_b[:-1])
    out_b[:-1] *= _INV_SQRT2


def step(state: WalkState) -> WalkState:
    """One walk step: Hadamard coin on every site, then the conditional shift."""
    return evolve(state, 1)


def trajectory(state: WalkState, n: int, every: int = 1) -> Iterator[WalkState]:
    """
    Yield snapshots at ``t0, t0 + every, ...`` up to ``t0 + n`` inclusive.

    The final state is always yielded, even if ``n`` is not a multiple of
    ``every``. Evolution uses two preallocated buffers that are swapped after
    each step; each yielded snapshot is an independent copy.
    """
    if n < 0:
        raise ValueError(f"number of steps must be non-negative (got {n})")
    if every < 1:
        raise ValueError(f"every must be >= 1 (got {every})")
    a = np.array(state.a)
    b = np.array(state.b)
    x_min = state.x_min
    buf_a = np.empty_like(a)
    buf_b = np.empty_like(b)
    t0 = state.t
    yield state
    for i in range(1, n + 1):
        if not _edges_clear(a, b):
            a, b, x_min = _grow(a, b, x_min)
            buf_a = np.empty_like(a)
            buf_b = np.empty_like(b)
        _step_into(a, b, buf_a, buf_b)
        a, buf_a = buf_a, a
        b, buf_b = buf_b, b
        if i % every == 0 or i == n:
            yield WalkState(a.copy(), b.copy(), x_min, t0 + i)


def evolve(state: WalkState, n: int) -> WalkState:
    """Apply ``n`` steps to ``state``; ``evolve(s, 0)`` returns ``s`` itself."""
    last = state
    for last in trajectory(state, n, every=max(n, 1)):
        pass
    return last
