"""Asymptotic iteration method (AIM) for the hyperbolic family, m = 0, 1, 2.

With ``psi(z) = eta^alpha (1-eta)^beta e^(-gamma eta) f(eta)``,
``eta = sech^2 z`` and ``alpha = sqrt(-eps)/2``, the Schroedinger equation
becomes ``f'' = lambda0 f' + s0 f`` where

    lambda0 = 2 gamma - (4 beta + 1) / (2 (eta - 1)) - (2 alpha + 1) / eta
    s0      = C + A / (eta - 1) + B / eta.

AIM iterates ``lambda_n = lambda_{n-1}' + s_{n-1} + lambda0 lambda_{n-1}``,
``s_n = s_{n-1}' + s0 lambda_{n-1}`` and eigenvalues are the roots in eps of
``delta_n = lambda_n s_{n-1} - lambda_{n-1} s_n`` at ``eta = r0``.  All
functions are carried as truncated Taylor series about ``r0``; each
iteration consumes one order.
"""
from __future__ import annotations

import concurrent.futures
import logging
from dataclasses import dataclass, field

import mpmath as mp

from .errors import DomainError, IterationBudgetError, TruncationError, UsageError
from .potential import PotentialSpec, potential_minimum, sector_state_count
from .precision import TaylorSeries, series_of_simple_pole, to_mpf
from .roots import refine_root, sign, sign_change_brackets
from .states import EigenResult, Parity

SUPPORTED_M = (0, 1, 2)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AimProblem:
    m: int
    beta: Parity
    v: mp.mpf
    r0: mp.mpf = mp.mpf(1) / 2
    taylor_order: int = 82
    # None selects the family default: 0 for m <= 1, sqrt(v)/2 for m = 2.
    gamma: mp.mpf | None = None

    def __post_init__(self):
        if self.m not in SUPPORTED_M:
            raise UsageError(f"AIM builders exist for m in {SUPPORTED_M}, got m={self.m}")
        object.__setattr__(self, "beta", Parity.coerce(self.beta))
        object.__setattr__(self, "v", to_mpf(self.v))
        object.__setattr__(self, "r0", to_mpf(self.r0))
        if not 0 < self.r0 < 1:
            raise UsageError(f"r0 must lie in (0, 1), got {mp.nstr(self.r0, 10)}")
        if not self.v > 0:
            raise UsageError("v must be positive")
        if self.gamma is not None:
            object.__setattr__(self, "gamma", to_mpf(self.gamma))

    @property
    def gamma_value(self) -> mp.mpf:
        if self.gamma is not None:
            return self.gamma
        return mp.sqrt(self.v) / 2 if self.m == 2 else mp.mpf(0)

    @property
    def v_min(self) -> mp.mpf:
        return potential_minimum(PotentialSpec(self.m, self.v))[1]


@dataclass(frozen=True)
class AimState:
    n: int
    lambda_n: TaylorSeries
    s_n: TaylorSeries
    lambda_prev: TaylorSeries | None
    s_prev: TaylorSeries | None
    lambda0: TaylorSeries
    s0: TaylorSeries


@dataclass(frozen=True)
class AimOptions:
    n_start: int = 4
    step: int = 4
    n_max: int = 80
    eps_floor: mp.mpf = mp.mpf(10) ** -14
    # root refinement tolerance; None means 10**-(dps - 20)
    tol: mp.mpf | None = None
    # agreement required between rounds n and n + step; None picks by m
    conv_tol: mp.mpf | None = None
    scan_points: int = 256
    log_points_per_decade: int = 8
    levels: int | None = None
    workers: int = 1

    def root_tol(self) -> mp.mpf:
        return mp.mpf(10) ** (-(mp.mp.dps - 20)) if self.tol is None else to_mpf(self.tol)

    def agreement_tol(self, m: int) -> mp.mpf:
        if self.conv_tol is not None:
            return to_mpf(self.conv_tol)
        # at low working precision delta_n cancels too much for the fixed targets
        return max(mp.mpf(10) ** (-13 if m == 2 else -25), mp.mpf(10) ** -(mp.mp.dps // 2))


def ode_coefficients(problem: AimProblem, epsilon):
    """``(lambda0 pole data, s0 pole data)`` as ``(const, residue at 1, residue at 0)``."""
    eps = to_mpf(epsilon)
    a = mp.sqrt(-eps) / 2
    b = problem.beta.value_mpf
    g = problem.gamma_value
    v = problem.v
    lam = (2 * g, -(4 * b + 1) / 2, -(2 * a + 1))
    A = -(2 * a**2 + 4 * a * b + a - 4 * b * g + 2 * b - g) / 2
    if problem.m == 0:
        A += v / 4
    B = -(-4 * a**2 - 8 * a * b - 8 * a * g - 2 * a - 4 * b - 4 * g + v) / 4
    C = -(g**2)
    if problem.m == 2:
        C += v / 4
    return lam, (C, A, B)


def _pole_form(data, r0, order: int) -> TaylorSeries:
    const, at_one, at_zero = data
    series = series_of_simple_pole(at_one, 1, r0, order) + series_of_simple_pole(at_zero, 0, r0, order)
    return series + TaylorSeries.constant(const, r0, order)


def aim_init(problem: AimProblem, epsilon, order: int | None = None) -> AimState:
    eps = to_mpf(epsilon)
    if not problem.v_min < eps < 0:
        raise DomainError(
            f"epsilon={mp.nstr(eps, 15)} outside (V_min, 0) = ({mp.nstr(problem.v_min, 15)}, 0)"
        )
    order = problem.taylor_order if order is None else order
    lam_data, s_data = ode_coefficients(problem, eps)
    lam0 = _pole_form(lam_data, problem.r0, order)
    s0 = _pole_form(s_data, problem.r0, order)
    return AimState(0, lam0, s0, None, None, lam0, s0)


def aim_iterate(state: AimState) -> AimState:
    lam, s = state.lambda_n, state.s_n
    if lam.order < 1:
        raise IterationBudgetError(f"Taylor order exhausted after {state.n} iterations")
    o = lam.order - 1
    lam_next = lam.differentiate().add(s, o).add(state.lambda0.mul(lam, o), o)
    s_next = s.differentiate().add(state.s0.mul(lam, o), o)
    return AimState(state.n + 1, lam_next, s_next, lam, s, state.lambda0, state.s0)


def aim_delta(state: AimState) -> mp.mpf:
    if state.n < 1:
        raise UsageError("the termination condition needs at least one iteration")
    return state.lambda_n(0) * state.s_prev(0) - state.lambda_prev(0) * state.s_n(0)


def aim_delta_relative(state: AimState) -> mp.mpf:
    """``|delta_n|`` divided by the size of the two products that cancel in it."""
    a = state.lambda_n(0) * state.s_prev(0)
    b = state.lambda_prev(0) * state.s_n(0)
    scale = abs(a) + abs(b)
    return abs(a - b) / scale if scale else mp.mpf(0)


def relative_residual(problem: AimProblem, epsilon, n: int) -> mp.mpf:
    state = aim_init(problem, epsilon, order=min(problem.taylor_order, n + 2))
    for _ in range(n):
        state = aim_iterate(state)
    return aim_delta_relative(state)


def delta_n(problem: AimProblem, epsilon, n: int) -> mp.mpf:
    """``delta_n(epsilon)`` at ``r0``, expanding only to the order n needs."""
    if n > problem.taylor_order:
        raise IterationBudgetError(
            f"{n} iterations need Taylor order >= {n}, problem allows {problem.taylor_order}"
        )
    state = aim_init(problem, epsilon, order=min(problem.taylor_order, n + 2))
    for _ in range(n):
        state = aim_iterate(state)
    return aim_delta(state)


def _delta_chunk(args):
    problem, eps_values, n, digits = args
    with mp.workdps(digits):
        return [delta_n(problem, e, n) for e in eps_values]


def delta_on_grid(problem: AimProblem, grid, n: int, workers: int = 1) -> list:
    """Evaluate ``delta_n`` on ``grid``; result order never depends on ``workers``."""
    grid = list(grid)
    if workers <= 1 or len(grid) < 2 * workers:
        return [delta_n(problem, e, n) for e in grid]
    size = -(-len(grid) // workers)
    chunks = [(problem, grid[i : i + size], n, mp.mp.dps) for i in range(0, len(grid), size)]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_delta_chunk, chunks))
    return [x for part in parts for x in part]


def scan_grid(problem: AimProblem, options: AimOptions) -> list:
    """Uniform points on (V_min (1 - 1e-6), -eps_floor) plus log-spaced points near 0."""
    lo = problem.v_min * (1 - mp.mpf(10) ** -6)
    hi = -to_mpf(options.eps_floor)
    pts = options.scan_points
    grid = {lo + (hi - lo) * i / (pts - 1) for i in range(pts)}
    top = mp.log10(-lo)
    bottom = mp.log10(-hi)
    count = int(mp.ceil((top - bottom) * options.log_points_per_decade))
    for i in range(1, count):
        grid.add(-mp.power(10, bottom + (top - bottom) * i / count))
    return sorted(x for x in grid if lo <= x <= hi)


@dataclass
class _Track:
    lo: mp.mpf
    hi: mp.mpf
    history: list = field(default_factory=list)
    converged: bool = False
    lost: bool = False


def _bracket_near(f, r, width, lo_limit, hi_limit, expansions: int = 10):
    """Find a sign change of ``f`` in a window around ``r``."""
    fr = f(r)
    if fr == 0:
        return r, r, fr, fr
    for _ in range(expansions):
        a = max(r - width, lo_limit)
        b = min(r + width, hi_limit)
        fa, fb = f(a), f(b)
        if sign(fa) != sign(fr):
            return a, r, fa, fr
        if sign(fb) != sign(fr):
            return r, b, fr, fb
        width *= 8
    return None


def aim_find_eigenvalues(problem: AimProblem, options: AimOptions | None = None) -> list[EigenResult]:
    """Locate, refine and converge the eigenvalues of one parity sector."""
    options = options or AimOptions()
    if options.n_start < 1 or options.step < 1:
        raise UsageError("n_start and step must be positive")
    n_max = min(options.n_max, problem.taylor_order)
    tol = options.root_tol()
    conv = options.agreement_tol(problem.m)
    grid = scan_grid(problem, options)
    lo_limit, hi_limit = grid[0], grid[-1]

    def follow(bracket, n) -> _Track:
        a, b, fa, fb = bracket
        track = _Track(a, b)
        f = lambda e, n=n: delta_n(problem, e, n)  # noqa: E731
        r, _ = refine_root(f, a, b, min(conv / 100, abs(b - a)), fa, fb)
        track.history.append((n, r))
        while n + options.step <= n_max:
            n += options.step
            f = lambda e, n=n: delta_n(problem, e, n)  # noqa: E731
            prev = track.history[-1][1]
            moved = abs(prev - track.history[-2][1]) if len(track.history) > 1 else mp.mpf(0)
            width = max(4 * moved, abs(prev) * mp.mpf(10) ** -8, conv)
            near = _bracket_near(f, prev, width, lo_limit, hi_limit)
            if near is None:
                track.lost = True
                break
            r, _ = refine_root(f, near[0], near[1], conv / 100, near[2], near[3])
            track.history.append((n, r))
            if abs(r - prev) < conv:
                r, _ = refine_root(f, near[0], near[1], tol, near[2], near[3])
                track.history[-1] = (n, r)
                track.converged = True
                break
        return track

    def known(bracket, tracks) -> bool:
        a, b = bracket[0], bracket[1]
        return any(a - conv <= t.history[-1][1] <= b + conv for t in tracks)

    # Deeper levels only produce a sign change of delta_n once n is large
    # enough, so scans are repeated at growing n until the sector's state
    # count (from the oscillation theorem) is reached.  Low-order scans can
    # also show sign changes that are not states; those tracks lose their
    # bracket at higher n and are dropped.
    expected = sector_state_count(PotentialSpec(problem.m, problem.v), problem.beta)
    wanted = expected if options.levels is None else min(options.levels, expected)
    results: list[_Track] = []
    n_scan = min(options.n_start, n_max)
    while len(results) < wanted:
        brackets = sign_change_brackets(grid, delta_on_grid(problem, grid, n_scan, options.workers))
        fresh = [br for br in brackets if not known(br, results)]
        for br in fresh[: wanted - len(results)]:
            track = follow(br, n_scan)
            if not track.lost and not known((track.history[-1][1],) * 2, results):
                results.append(track)
        n_scan += 2 * options.step
        if n_scan > n_max:
            break
    if len(results) < wanted:
        log.warning(
            "m=%d v=%s beta=%s: found %d of %d states within %d iterations",
            problem.m, mp.nstr(problem.v, 15), problem.beta.label, len(results), wanted, n_max,
        )
    results = sorted(results, key=lambda t: t.history[-1][1])[:wanted]

    out = []
    for track in sorted(results, key=lambda t: t.history[-1][1]):
        n_final, eps = track.history[-1]
        flags = []
        if not track.converged:
            flags.append("not-converged")
        diffs = [abs(y[1] - x[1]) for x, y in zip(track.history, track.history[1:])]
        if len(diffs) >= 3 and not (diffs[-3] >= diffs[-2] >= diffs[-1]):
            flags.append("non-monotone")
        residual = relative_residual(problem, eps, n_final)
        out.append(
            EigenResult(
                n=len(out),
                beta=problem.beta,
                epsilon=eps,
                method="aim",
                iterations=n_final,
                residual=residual,
                converged=track.converged,
                flags=tuple(flags),
                history=tuple(track.history),
            )
        )
    return out


def m1_series_coefficients(beta, epsilon, v, K: int) -> list:
    """``c_0..c_K`` of ``f(eta) = sum c_n eta^n`` for m = 1 (gamma = 0).

    ``c_n = (A_n c_{n-1} + v c_{n-2}) / (4 n (n + 2 alpha))`` with
    ``A_n = 4n^2 - 6n + 2 + 8 beta n - 4 beta - eps - 6 alpha + 8 alpha beta + 8 alpha n - v``.
    """
    b = Parity.coerce(beta).value_mpf
    eps, v = to_mpf(epsilon), to_mpf(v)
    if not eps < 0:
        raise DomainError("epsilon must be negative")
    a = mp.sqrt(-eps) / 2
    c = [mp.mpf(1)]
    if K >= 1:
        c.append((4 * b + 2 * a * (1 + 4 * b) - eps - v) / (4 + 8 * a))
    for n in range(2, K + 1):
        A = 4 * n**2 - 6 * n + 2 + 8 * b * n - 4 * b - eps - 6 * a + 8 * a * b + 8 * a * n - v
        c.append((A * c[n - 1] + v * c[n - 2]) / (4 * n * (n + 2 * a)))
    return c


def m1_series_P(beta, alpha, v, K: int) -> list:
    """``P_0..P_K`` with ``c_n = P_n / (n! (1 + 2 alpha)_n 4^n)``."""
    b = Parity.coerce(beta)
    a, v = to_mpf(alpha), to_mpf(v)
    prev, cur = mp.mpf(0), mp.mpf(1)
    out = [cur]
    for n in range(K):
        if b is Parity.EVEN:
            lead = 2 * n * (2 * n + 1) + (8 * n + 2) * a + 4 * a**2 - v
        else:
            lead = 2 * (n + 1) * (2 * n + 1) + (8 * n + 6) * a + 4 * a**2 - v
        prev, cur = cur, lead * cur + 4 * n * v * (n + 2 * a) * prev
        out.append(cur)
    return out


def m1_series_at_one(beta, epsilon, v, K: int) -> list:
    """``d_0..d_K`` of the solution regular at ``eta = 1``, ``f = sum d_k (eta - 1)^k``."""
    problem = AimProblem(1, beta, v)
    (c, r1, r0), (C, A, B) = ode_coefficients(problem, epsilon)
    # eta (eta - 1) times lambda0 and s0, as polynomials in t = eta - 1
    L = (r1, c + r1 + r0, c)
    S = (A, C + A + B, C)
    d = [mp.mpf(1)]
    for k in range(K):
        acc = -(k * (k - 1) - L[1] * k - S[0]) * d[k]
        if k >= 1:
            acc += (L[2] * (k - 1) + S[1]) * d[k - 1]
        if k >= 2:
            acc += S[2] * d[k - 2]
        d.append(acc / ((k + 1) * (k - L[0])))
    return d


def _sum_series(coeffs, x, threshold, adaptive: bool):
    total, power, last, small_run = mp.mpf(0), mp.mpf(1), mp.mpf(0), 0
    for k, ck in enumerate(coeffs):
        last = ck * power
        total += last
        power *= x
        if adaptive and k > 2:
            small_run = small_run + 1 if abs(last) <= threshold * abs(total) else 0
            if small_run >= 4:
                break
    if abs(last) > threshold * abs(total):
        raise TruncationError(
            f"series tail {mp.nstr(abs(last), 5)} exceeds {mp.nstr(threshold, 3)} of the sum at K={len(coeffs) - 1}",
            tail_bound=abs(last),
        )
    return total


def m1_wavefunction(beta, epsilon, v, z, K: int | None = None) -> mp.mpf:
    """Unnormalized m = 1 eigenfunction from the Frobenius series.

    With an explicit ``K`` the series about ``eta = 0`` is summed to ``K``
    terms everywhere.  With ``K=None`` terms are added until the tail is
    negligible, and for ``eta > 1/2`` (where the series about 0 converges
    only algebraically near ``z = 0``) the solution regular at ``eta = 1`` is
    used instead, scaled to agree at ``eta = 1/2``.
    """
    beta = Parity.coerce(beta)
    eps = to_mpf(epsilon)
    z = to_mpf(z)
    if beta is Parity.ODD and z == 0:
        return mp.mpf(0)
    eta = mp.sech(z) ** 2
    threshold = mp.mpf(10) ** (-(mp.mp.dps // 2))
    half = mp.mpf(1) / 2
    if K is not None:
        total = _sum_series(m1_series_coefficients(beta, eps, v, K), eta, threshold, False)
    elif eta <= half:
        total = _sum_series(m1_series_coefficients(beta, eps, v, 4000), eta, threshold, True)
    else:
        d = m1_series_at_one(beta, eps, v, 4000)
        at_half = _sum_series(m1_series_coefficients(beta, eps, v, 4000), half, threshold, True)
        scale = at_half / _sum_series(d, -half, threshold, True)
        total = scale * _sum_series(d, eta - 1, threshold, True)
    psi = mp.sech(z) ** mp.sqrt(-eps) * total
    if beta is Parity.ODD:
        psi *= mp.tanh(z)
    return psi
