"""Classical Golub-Kahan bidiagonalization and its projection approximation.

The two coupled recurrences
    r_k = A q_k - beta_{k-1} p_{k-1},   alpha_k = ||r_k||,  p_k = r_k/alpha_k,
    s_k = A^T p_k - alpha_k q_k,        beta_k  = ||s_k||,  q_{k+1} = s_k/beta_k,
build orthonormal P_k, Q_k with P_k^T A Q_k upper bidiagonal (alpha on the
diagonal, beta above it). Signs are fixed by taking alpha_k, beta_k >= 0.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .reference import gmf_dense
from .traces import ConvergenceTrace, relative_error

BREAKDOWN_RTOL = 1e-14


@dataclass
class BidiagonalState:
    """State of the bidiagonalization after k completed steps."""

    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    p: np.ndarray = None          # p_k
    p_prev: np.ndarray = None     # p_{k-1}
    q: np.ndarray = None          # q_{k+1}, the next start vector
    P: list = None                # stored bases (reorthogonalization / evaluation)
    Q: list = None
    breakdown: bool = False

    @property
    def k(self):
        return len(self.alpha)

    def bidiagonal(self, k=None):
        """Dense upper-bidiagonal B_k."""
        k = self.k if k is None else k
        B = np.zeros((k, k))
        B[np.arange(k), np.arange(k)] = self.alpha[:k]
        if k > 1:
            B[np.arange(k - 1), np.arange(1, k)] = self.beta[:k - 1]
        return B


def gk_init(b, store_bases=True):
    b = np.asarray(b, dtype=float)
    nb = np.linalg.norm(b)
    if nb == 0:
        raise ArgumentError("start vector must be nonzero")
    state = BidiagonalState()
    state.q = b / nb
    if store_bases:
        state.P = []
        state.Q = [state.q]
    return state


def _reorthogonalize(w, basis):
    # two passes of modified Gram-Schmidt against the stored columns
    for _ in range(2):
        for v in basis:
            w = w - (v @ w) * v
    return w


def gk_step(state, op, reorth=False):
    """Advance the bidiagonalization by one step (mutates and returns state).

    A vanished alpha or beta (below 1e-14 * ||A||) marks the invariance index:
    the state is flagged ``breakdown`` and no further vectors are produced.
    """
    if state.breakdown:
        return state
    if reorth and (state.P is None or state.Q is None):
        raise ArgumentError("reorthogonalization requires stored bases")
    tol = BREAKDOWN_RTOL * op.norm_estimate()

    r = op.apply(state.q)
    if state.p is not None:
        r = r - state.beta[-1] * state.p
    if reorth and state.P:
        r = _reorthogonalize(r, state.P)
    alpha = np.linalg.norm(r)
    if alpha <= tol:
        state.breakdown = True
        return state
    p_new = r / alpha

    s = op.applyt(p_new) - alpha * state.q
    if reorth and state.Q:
        s = _reorthogonalize(s, state.Q)
    beta = np.linalg.norm(s)

    state.alpha.append(float(alpha))
    state.p_prev = state.p
    state.p = p_new
    if state.P is not None:
        state.P.append(p_new)
    if beta <= tol:
        state.breakdown = True
        return state
    state.beta.append(float(beta))
    state.q = s / beta
    if state.Q is not None:
        state.Q.append(state.q)
    return state


def gk_approximate(f, op, b, k_max, reorth=False, reference=None):
    """Approximations y_k = ||b|| P_k f◇(B_k) e_1 for k = 1..k_max.

    Stops early at breakdown (the Krylov space became invariant). When a
    reference vector is supplied the trace records relative 2-norm errors.
    """
    b = np.asarray(b, dtype=float)
    nb = np.linalg.norm(b)
    state = gk_init(b, store_bases=True)
    trace = ConvergenceTrace()
    ys = []
    for k in range(1, int(k_max) + 1):
        gk_step(state, op, reorth=reorth)
        if state.k < k:
            break
        Pk = np.column_stack(state.P[:k])
        # rtol=0: f acts on every positive singular value of B_k; truncating
        # would mask the small-singular-value pollution of wide matrices
        yk = nb * (Pk @ gmf_dense(f, state.bidiagonal(k), rtol=0.0)[:, 0])
        ys.append(yk)
        err = relative_error(yk, reference) if reference is not None else None
        trace.record(k, error=err)
        if state.breakdown:
            break
    return ys, trace
