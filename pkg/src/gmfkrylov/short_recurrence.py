"""Short-recurrence rational Golub-Kahan: O(1) vectors per step.

The projected matrix B_k = P_k^T A Q_k of the rational method is upper
triangular and quasiseparable: its strictly upper part is that of a rank-one
matrix, so it is determined by the diagonal d, the first superdiagonal beta
and the second superdiagonal gamma. One step updates

    w = A q_k
    beta_{k-1}  = w . p_{k-1}
    gamma_{k-2} = w . p_{k-2}
    x_k = (gamma_{k-2}/beta_{k-2}) x_{k-1} + beta_{k-1} p_{k-1}
    w = w - x_k;  d_k = ||w||;  p_k = w / d_k

where x_k carries the whole above-diagonal part of column k in the P basis,
so only two inner products are needed. The companion basis q_k comes from the
short (two-column) rational Lanczos recurrence on A^T A with the same poles.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .poles import PoleSequence
from .rational import GramLanczos
from .reference import gmf_dense
from .traces import ConvergenceTrace, relative_error

BREAKDOWN_RTOL = 1e-14
BETA_FALLBACK_RTOL = 1e-13


@dataclass
class QuasiseparableUpper:
    """Generator representation (d, beta, gamma) of the projected matrix."""

    d: list = field(default_factory=list)
    beta: list = field(default_factory=list)     # beta[k] = B[k, k+1]
    gamma: list = field(default_factory=list)    # gamma[k] = B[k, k+2]
    fallback_steps: list = field(default_factory=list)

    @property
    def k(self):
        return len(self.d)

    def dense(self, k=None):
        return reconstruct_dense(self, k)

    def generators(self, k=None):
        """Vectors u, v with triu(B, 1) = triu(u v^T, 1).

        Built from the column recursion: v accumulates the ratios
        gamma_{t-1}/beta_{t-1}, u rescales beta accordingly.
        """
        k = self.k if k is None else k
        u = np.zeros(k)
        v = np.zeros(k)
        if k < 2:
            return u, v
        scale = 1.0
        v[1] = 1.0
        for j in range(2, k):
            if self.beta[j - 2] == 0.0:
                raise ArgumentError(
                    "vanished beta: generator form unavailable (fallback path)")
            scale *= self.gamma[j - 2] / self.beta[j - 2]
            v[j] = scale
        running = 1.0
        for i in range(k - 1):
            u[i] = self.beta[i] / running
            if i + 1 < k - 1:
                if self.beta[i] == 0.0:
                    raise ArgumentError(
                        "vanished beta: generator form unavailable (fallback path)")
                running *= self.gamma[i] / self.beta[i]
        return u, v


def reconstruct_dense(B, k=None):
    """Dense upper-triangular matrix from the (d, beta, gamma) generators.

    Entry (i, j) for j > i + 1 follows the rank-one column recursion
    B[:, j] = (gamma_{j-2}/beta_{j-2}) * B[:, j-1] above the superdiagonal.
    """
    k = B.k if k is None else int(k)
    out = np.zeros((k, k))
    for j in range(k):
        out[j, j] = B.d[j]
        if j >= 1:
            out[j - 1, j] = B.beta[j - 1]
        if j >= 2:
            out[j - 2, j] = B.gamma[j - 2]
            if B.beta[j - 2] == 0.0 and j >= 3:
                raise ArgumentError(
                    "vanished beta below a gamma entry: column recursion undefined")
            for i in range(j - 3, -1, -1):
                out[i, j] = (B.gamma[j - 2] / B.beta[j - 2]) * out[i, j - 1]
    return out


def rgk_step(op, q_k, p_prev1, p_prev2, x_prev, beta_prev, *, p_history=None):
    """One step of the short-recurrence update of P and B.

    Returns (p_k, d_k, beta_{k-1}, gamma_{k-2}, x_k, used_fallback). The first
    two steps pass ``p_prev1``/``p_prev2`` as None. When |beta_{k-2}| has
    vanished the rank-one recursion for x_k is undefined; with ``p_history``
    available the step falls back to explicit orthogonalization against the
    stored P columns for this step only.
    """
    w = op.apply(q_k)
    scale = op.norm_estimate()
    used_fallback = False

    if p_prev1 is None:
        x_k = np.zeros(op.rows)
        beta_km1 = None
        gamma_km2 = None
    elif p_prev2 is None:
        beta_km1 = float(w @ p_prev1)
        gamma_km2 = None
        x_k = beta_km1 * p_prev1
    else:
        beta_km1 = float(w @ p_prev1)
        gamma_km2 = float(w @ p_prev2)
        if abs(beta_prev) <= BETA_FALLBACK_RTOL * scale:
            if p_history is None:
                raise ArgumentError(
                    f"beta_{{k-2}} = {beta_prev:.3e} vanished and no stored P "
                    "columns are available for the fallback")
            used_fallback = True
            x_k = np.zeros(op.rows)
            for p in p_history:
                x_k += (w @ p) * p
        else:
            x_k = (gamma_km2 / beta_prev) * x_prev + beta_km1 * p_prev1

    w = w - x_k
    d_k = float(np.linalg.norm(w))
    if d_k <= BREAKDOWN_RTOL * scale:
        return None, d_k, beta_km1, gamma_km2, x_k, used_fallback
    return w / d_k, d_k, beta_km1, gamma_km2, x_k, used_fallback


def rgk_run(f, op, b, poles, k_max, reference=None, evaluate=True):
    """Run the short-recurrence rational Golub-Kahan method.

    The recurrence itself keeps two p-columns, two q-columns and x_k; the
    produced P columns are appended to a write-once output buffer because the
    approximation y_k = ||b|| P_k f◇(B_k) e_1 needs them (they are never
    re-orthogonalized). The trace records the orthogonality drift
    ||I - P_k^T P_k|| per iteration, and relative errors when a reference is
    supplied. Returns (ys, B, trace).
    """
    b = np.asarray(b, dtype=float)
    nb = np.linalg.norm(b)
    poles = poles if isinstance(poles, PoleSequence) else PoleSequence(tuple(poles))
    if int(k_max) - 1 > len(poles):
        raise ArgumentError(
            f"{len(poles)} poles support at most {len(poles) + 1} iterations")
    eng = GramLanczos(op, b, poles, orthogonalize="short")
    B = QuasiseparableUpper()
    trace = ConvergenceTrace()
    ys = []
    P_buffer = []
    gram = np.zeros((0, 0))   # P_k^T P_k, grown incrementally for the drift record
    p1 = p2 = None
    x_prev = np.zeros(op.rows)
    beta_prev = 0.0

    for k in range(1, int(k_max) + 1):
        if k == 1:
            q = eng.q
        else:
            q = eng.advance()
            if q is None:
                break
        p_k, d_k, beta_km1, gamma_km2, x_k, fb = rgk_step(
            op, q, p1, p2, x_prev, beta_prev,
            p_history=P_buffer if P_buffer else None)
        if p_k is None:
            break
        if fb:
            B.fallback_steps.append(k)
        B.d.append(d_k)
        if beta_km1 is not None:
            B.beta.append(beta_km1)
        if gamma_km2 is not None:
            B.gamma.append(gamma_km2)

        cross = np.array([p_k @ p for p in P_buffer])
        gram_new = np.zeros((k, k))
        gram_new[:k - 1, :k - 1] = gram
        gram_new[:k - 1, k - 1] = cross
        gram_new[k - 1, :k - 1] = cross
        gram_new[k - 1, k - 1] = p_k @ p_k
        gram = gram_new
        drift = float(np.linalg.norm(np.eye(k) - gram, 2))

        P_buffer.append(p_k)
        p2 = p1
        p1 = p_k
        x_prev = x_k
        # the step after next divides by beta_{k-2}: the one appended just now
        beta_prev = B.beta[-1] if B.beta else 0.0

        err = None
        if evaluate:
            Pk = np.column_stack(P_buffer)
            yk = nb * (Pk @ gmf_dense(f, B.dense(), rtol=0.0)[:, 0])
            ys.append(yk)
            if reference is not None:
                err = relative_error(yk, reference)
        trace.record(k, error=err, drift=drift)
    return ys, B, trace
