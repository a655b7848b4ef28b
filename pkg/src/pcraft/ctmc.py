"""Continuous-time Markov chain engine.

A chain is a sparse rate generator over hashable state labels plus an
initial distribution.  Three solvers cover the analyses the rest of the
package needs:

* ``steady_state``: stationary distribution of an ergodic chain via
  Grassmann-Taksar-Heyman elimination (no subtractions, so no
  cancellation), guarded by a strong-connectivity check and a residual
  test.
* ``transient_distribution``: state distribution at time ``t`` by
  uniformization.  The jump rate is ``q = 1.02 * max |diagonal|``.
* ``cumulative_occupancy``: expected reward-weighted occupancy time over
  a finite horizon (availability-style rewards), same machinery.

Rates in one model can span microseconds to years, so ``q*t`` can reach
1e13 and a single Poisson series is hopeless.  The engine therefore
splits the horizon into ``2**m`` equal subintervals chosen so each
subinterval carries at most ``_BASE_STEP_EVENTS`` expected jumps, builds
the subinterval propagator ``M = exp(Q*dt)`` and occupancy integral
``C = int_0^dt exp(Q*s) ds`` from a short Poisson-weighted series, and
chains subintervals by repeated squaring::

    M(2t) = M(t) M(t)          C(2t) = C(t) + M(t) C(t)

All terms are nonnegative, so the squaring never cancels, and the exact
row-sum identities (``M`` stochastic, ``C`` rows summing to the elapsed
time) are restored after every level.  Moderate horizons (``q*t`` below
``_VECTOR_SERIES_LIMIT``) skip the matrix work and run a plain vector
series instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Ctmc",
    "NotErgodicError",
    "PoissonWindow",
    "build_ctmc",
    "cumulative_occupancy",
    "indicator_reward",
    "occupancy_from_each_start",
    "poisson_weights",
    "steady_state",
    "transient_distribution",
]

StateLabel = Hashable
Transition = Tuple[StateLabel, StateLabel, float]

_UNIFORMIZATION_SLACK = 1.02
_VECTOR_SERIES_LIMIT = 4096.0   # largest q*t solved by a single vector series
_BASE_STEP_EVENTS = 8.0         # target q*dt for the squaring base step
_BASE_STEP_TOL = 1e-15          # Poisson mass dropped per base step
_PMF_GUARD = 1e-34              # stop the pmf recursion below this (mode-relative)


class NotErgodicError(ValueError):
    """Raised when a stationary distribution is requested for a reducible chain."""


class PoissonWindow(NamedTuple):
    """Truncated Poisson pmf: ``weights[i]`` approximates ``pmf(left + i)``."""

    left: int
    right: int
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class Ctmc:
    """Immutable CTMC: labelled states, sparse generator, initial distribution.

    Attributes
    ----------
    states : tuple
        State labels; all arrays in this module are aligned with this order.
    generator : scipy.sparse.csr_matrix
        Rate matrix with nonnegative off-diagonal entries and rows summing
        to zero (diagonal holds the negated exit rates).
    initial : numpy.ndarray
        Probability distribution over ``states`` at time zero.
    """

    states: tuple
    generator: sp.csr_matrix
    initial: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def n(self) -> int:
        return len(self.states)

    def index_of(self, state: StateLabel) -> int:
        try:
            return self._index[state]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown state {state!r}") from None

    @property
    def exit_rates(self) -> np.ndarray:
        return -self.generator.diagonal()


def build_ctmc(transitions: Iterable[Transition],
               initial: Mapping[StateLabel, float]) -> Ctmc:
    """Assemble a CTMC from labelled transitions and an initial distribution.

    Parameters
    ----------
    transitions : iterable of (source, target, rate)
        Rates must be positive and finite; duplicate (source, target)
        pairs are summed.  Self loops are rejected: they are meaningless
        for a generator.
    initial : mapping from state label to probability
        Defines the state set (insertion order fixes the state indexing)
        and the time-zero distribution; must sum to one.

    Returns
    -------
    Ctmc
    """
    items = list(initial.items())
    if not items:
        raise ValueError("empty state set: initial distribution defines no states")
    states = tuple(label for label, _ in items)
    probs = np.array([float(p) for _, p in items], dtype=float)
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise ValueError("initial probabilities must be finite and nonnegative")
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"initial probabilities sum to {total!r}, expected 1")
    probs /= total

    index = {label: i for i, label in enumerate(states)}
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for src, dst, rate in transitions:
        if src not in index:
            raise ValueError(f"transition references unknown state {src!r}")
        if dst not in index:
            raise ValueError(f"transition references unknown state {dst!r}")
        if src == dst:
            raise ValueError(f"self-loop transition on state {src!r} is not allowed")
        r = float(rate)
        if not math.isfinite(r) or r <= 0.0:
            raise ValueError(
                f"transition rate for {src!r} -> {dst!r} must be positive "
                f"and finite, got {rate!r}")
        rows.append(index[src])
        cols.append(index[dst])
        vals.append(r)

    n = len(states)
    off = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    exit_rates = np.asarray(off.sum(axis=1)).ravel()
    gen = (off - sp.diags(exit_rates, format="csr")).tocsr()
    probs.setflags(write=False)
    return Ctmc(states=states, generator=gen, initial=probs)


def indicator_reward(ctmc: Ctmc, predicate: Callable[[StateLabel], bool]) -> np.ndarray:
    """0/1 reward vector selecting the states where ``predicate`` holds."""
    return np.array([1.0 if predicate(s) else 0.0 for s in ctmc.states])


def poisson_weights(qt: float, tol: float = 1e-10) -> PoissonWindow:
    """Truncated Poisson(qt) pmf covering all but ``tol`` of the mass.

    The pmf is evaluated by recurring outward from the mode, whose value
    is computed in log space, so the window stays well scaled for large
    ``qt`` (1e6 and beyond; memory grows like ``sqrt(qt)``).

    Parameters
    ----------
    qt : float
        Nonnegative Poisson mean (jump rate times elapsed time).
    tol : float
        Upper bound on the pmf mass outside the returned window.

    Returns
    -------
    PoissonWindow
        ``(left, right, weights)`` with ``sum(weights) >= 1 - tol``.
    """
    if not math.isfinite(qt) or qt < 0.0:
        raise ValueError(f"Poisson mean must be finite and nonnegative, got {qt!r}")
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")
    if qt == 0.0:
        return PoissonWindow(0, 0, np.array([1.0]))

    mode = int(qt)

    below: list[float] = []   # mode-relative pmf at mode-1, mode-2, ...
    s = 1.0
    k = mode
    while k > 0:
        s *= k / qt
        if s < _PMF_GUARD:
            break
        below.append(s)
        k -= 1
    above: list[float] = []   # mode-relative pmf at mode+1, mode+2, ...
    s = 1.0
    k = mode
    while True:
        s *= qt / (k + 1)
        if s < _PMF_GUARD:
            break
        above.append(s)
        k += 1

    lo = mode - len(below)
    scaled = np.concatenate([np.array(below[::-1]), [1.0], np.array(above)])
    # The mass outside the recursion guard is below 1e-30, so normalizing
    # the full window to one recovers the absolute scale more accurately
    # than evaluating the mode pmf in log space (which loses ~1e-9 of
    # relative precision once qt reaches 1e6).
    weights = scaled / scaled.sum()

    # Trim each tail to tol/2, keeping true (unnormalized) pmf values.
    cut = 0.5 * tol
    prefix = np.cumsum(weights)
    drop_left = int(np.searchsorted(prefix, cut, side="right"))
    suffix = np.cumsum(weights[::-1])
    drop_right = int(np.searchsorted(suffix, cut, side="right"))
    hi = lo + len(weights) - 1 - drop_right
    lo = lo + drop_left
    trimmed = weights[drop_left:len(weights) - drop_right]
    return PoissonWindow(lo, hi, trimmed)


def steady_state(ctmc: Ctmc, tol: float = 1e-12) -> np.ndarray:
    """Stationary distribution of an ergodic chain.

    Ergodicity is established first by a strong-connectivity check on the
    positive-rate graph; reducible chains (absorbing states, unreachable
    states) raise :class:`NotErgodicError`.  The solve itself is GTH
    elimination, and the result is rejected unless the scaled residual
    ``max|pi Q| / max_exit_rate`` is at most ``tol``.

    Parameters
    ----------
    ctmc : Ctmc
    tol : float
        Residual acceptance threshold (relative to the largest exit rate).

    Returns
    -------
    numpy.ndarray
        Distribution aligned with ``ctmc.states``.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")
    n = ctmc.n
    if n == 1:
        return np.array([1.0])

    positive = ctmc.generator.copy()
    positive.setdiag(0.0)
    positive.eliminate_zeros()
    ncomp, _ = connected_components(positive, directed=True, connection="strong")
    if ncomp != 1:
        raise NotErgodicError(
            "chain is not ergodic (state graph is reducible); the stationary "
            "distribution is undefined, use transient analysis instead")

    # GTH elimination on the dense generator: uses off-diagonal rates only.
    a = ctmc.generator.toarray()
    for k in range(n - 1):
        scale = np.sum(a[k, k + 1:n])
        if scale <= 0.0:
            raise NotErgodicError(
                "chain is not ergodic (no transitions leave a state block)")
        a[k + 1:n, k] /= scale
        a[k + 1:n, k + 1:n] += np.outer(a[k + 1:n, k], a[k, k + 1:n])
    pi = np.zeros(n)
    pi[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        pi[k] = np.dot(pi[k + 1:n], a[k + 1:n, k])
    pi /= pi.sum()

    q_max = float(ctmc.exit_rates.max())
    residual = float(np.abs(pi @ ctmc.generator).max())
    if residual > tol * max(q_max, np.finfo(float).tiny):
        raise ArithmeticError(
            f"stationary solve residual {residual:.3e} exceeds tolerance")
    return pi


def transient_distribution(ctmc: Ctmc, t: float, tol: float = 1e-10) -> np.ndarray:
    """State distribution at time ``t`` starting from ``ctmc.initial``.

    Parameters
    ----------
    ctmc : Ctmc
    t : float
        Nonnegative time in the generator's rate units.
    tol : float
        Bound on the uniformization truncation error.

    Returns
    -------
    numpy.ndarray
        Distribution aligned with ``ctmc.states``; sums to one within tol.
    """
    _check_time_and_tol(t, tol, allow_zero=True)
    q = _UNIFORMIZATION_SLACK * float(ctmc.exit_rates.max()) if ctmc.n else 0.0
    if t == 0.0 or q == 0.0:
        return ctmc.initial.copy()
    qt = q * t
    if qt <= _VECTOR_SERIES_LIMIT:
        pi, _ = _vector_series(ctmc, q, t, tol, reward=None)
        return pi
    m_mat, _ = _propagator(ctmc, q, t, tol, need_occupancy=False)
    pi = ctmc.initial @ m_mat
    return pi / pi.sum()


def cumulative_occupancy(ctmc: Ctmc, reward: np.ndarray, horizon: float,
                         tol: float = 1e-10) -> float:
    """Expected value of ``int_0^horizon reward(X(s)) ds``.

    With a 0/1 reward this is the expected time spent in the selected
    states, so dividing by ``horizon`` gives interval availability.

    Parameters
    ----------
    ctmc : Ctmc
    reward : numpy.ndarray
        One bounded nonnegative reward per state.
    horizon : float
        Positive horizon in the generator's rate units.
    tol : float
        Bound on the truncation error relative to ``horizon``.

    Returns
    -------
    float
        Expected accumulated reward (reward units times time units).
    """
    r = _check_reward(ctmc, reward)
    _check_time_and_tol(horizon, tol, allow_zero=False)
    q = _UNIFORMIZATION_SLACK * float(ctmc.exit_rates.max()) if ctmc.n else 0.0
    if q == 0.0:
        return float(ctmc.initial @ r) * horizon
    if q * horizon <= _VECTOR_SERIES_LIMIT:
        _, cum = _vector_series(ctmc, q, horizon, tol, reward=r)
        return float(cum)
    m_mat, c_mat = _propagator(ctmc, q, horizon, tol, need_occupancy=True)
    return float(ctmc.initial @ (c_mat @ r))


def occupancy_from_each_start(ctmc: Ctmc, reward: np.ndarray, horizon: float,
                              tol: float = 1e-10) -> np.ndarray:
    """Expected accumulated reward over ``horizon`` from every start state.

    Equivalent to evaluating :func:`cumulative_occupancy` once per
    deterministic start, but computed in a single pass.  Model families
    that share one generator and differ only in the initial state (node
    pools of different depths, over-provisioning levels) read their whole
    sweep off this vector.
    """
    r = _check_reward(ctmc, reward)
    _check_time_and_tol(horizon, tol, allow_zero=False)
    q = _UNIFORMIZATION_SLACK * float(ctmc.exit_rates.max()) if ctmc.n else 0.0
    if q == 0.0:
        return r * horizon
    if q * horizon <= _VECTOR_SERIES_LIMIT:
        return _vector_series_all_starts(ctmc, q, horizon, tol, r)
    _, c_mat = _propagator(ctmc, q, horizon, tol, need_occupancy=True)
    return c_mat @ r


def _check_time_and_tol(t: float, tol: float, allow_zero: bool) -> None:
    if not math.isfinite(t) or t < 0.0 or (t == 0.0 and not allow_zero):
        kind = "nonnegative" if allow_zero else "positive"
        raise ValueError(f"time horizon must be finite and {kind}, got {t!r}")
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")


def _check_reward(ctmc: Ctmc, reward: np.ndarray) -> np.ndarray:
    r = np.asarray(reward, dtype=float)
    if r.shape != (ctmc.n,):
        raise ValueError(f"reward vector must have length {ctmc.n}, got shape {r.shape}")
    if not np.all(np.isfinite(r)) or np.any(r < 0):
        raise ValueError("reward entries must be finite and nonnegative")
    return r


def _weights_and_tails(qt: float, tol: float) -> tuple[int, np.ndarray, np.ndarray]:
    """Poisson window plus tail probabilities P(N > k) for k = 0..right."""
    window = poisson_weights(qt, tol)
    w = window.weights
    total = w.sum()
    tails = total - np.concatenate([np.zeros(window.left), np.cumsum(w)])
    np.maximum(tails, 0.0, out=tails)
    return window.left, w, tails


def _vector_series(ctmc: Ctmc, q: float, t: float, tol: float,
                   reward: np.ndarray | None) -> tuple[np.ndarray, float]:
    """Single uniformization series on the initial row vector."""
    left, w, tails = _weights_and_tails(q * t, min(tol, 1e-14))
    right = left + len(w) - 1
    p_t = sp.identity(ctmc.n, format="csr") + ctmc.generator.multiply(1.0 / q)
    p_from = p_t.T.tocsr()   # x P computed as P^T x

    x = ctmc.initial.astype(float)
    acc = np.zeros(ctmc.n)
    cum = 0.0
    for k in range(right + 1):
        if k >= left:
            acc += w[k - left] * x
        if reward is not None:
            cum += tails[k] * float(x @ reward)
        if k < right:
            x = p_from @ x
    pi = acc / acc.sum()
    if reward is None:
        return pi, 0.0
    # Rescale so an all-ones reward integrates to exactly the horizon.
    return pi, cum * t / tails.sum()


def _vector_series_all_starts(ctmc: Ctmc, q: float, t: float, tol: float,
                              reward: np.ndarray) -> np.ndarray:
    left, w, tails = _weights_and_tails(q * t, min(tol, 1e-14))
    right = left + len(w) - 1
    p_t = (sp.identity(ctmc.n, format="csr")
           + ctmc.generator.multiply(1.0 / q)).tocsr()
    v = reward.astype(float)
    acc = np.zeros(ctmc.n)
    for k in range(right + 1):
        acc += tails[k] * v
        if k < right:
            v = p_t @ v
    return acc * (t / tails.sum())


def _propagator(ctmc: Ctmc, q: float, t: float, tol: float,
                need_occupancy: bool) -> tuple[np.ndarray, np.ndarray | None]:
    """Dense ``exp(Q t)`` and optionally ``int_0^t exp(Q s) ds`` by squaring."""
    n = ctmc.n
    qt = q * t
    levels = max(1, math.ceil(math.log2(qt / _BASE_STEP_EVENTS)))
    dt = t / (1 << levels)

    left, w, tails = _weights_and_tails(q * dt, _BASE_STEP_TOL)
    if left != 0:  # q*dt <= _BASE_STEP_EVENTS keeps the window anchored at zero
        raise AssertionError("base uniformization window lost its head")
    right = len(w) - 1
    p_step = np.eye(n) + ctmc.generator.toarray() / q

    power = np.eye(n)
    m_mat = np.zeros((n, n))
    c_mat = np.zeros((n, n)) if need_occupancy else None
    for k in range(right + 1):
        m_mat += w[k] * power
        if c_mat is not None:
            c_mat += (tails[k] / q) * power
        if k < right:
            power = power @ p_step

    _normalize_rows(m_mat, 1.0)
    if c_mat is not None:
        _normalize_rows(c_mat, dt)
    for _ in range(levels):
        if c_mat is not None:
            c_mat += m_mat @ c_mat
        m_mat = m_mat @ m_mat
        dt *= 2.0
        _normalize_rows(m_mat, 1.0)
        if c_mat is not None:
            _normalize_rows(c_mat, dt)
    return m_mat, c_mat


def _normalize_rows(mat: np.ndarray, target: float) -> None:
    sums = mat.sum(axis=1, keepdims=True)
    np.divide(mat, sums, out=mat)
    if target != 1.0:
        mat *= target
