"""Damped least-squares search for coefficient matrices satisfying the
constant-curvature and constant-second-form constraints at given (d, n).

Variables are the complex 2 x n matrices A_1..A_d of F.  The residual is the
squared Frobenius deviation of the Gram matrices of the U and Q block rows
from their binomial-diagonal targets; rows carrying excess-degree blocks are
included with zero targets, so a zero residual certifies the full identities.
The Jacobian is assembled analytically from the wedge structure tensors, and
restarts are deduplicated by a gauge-invariant singular-value fingerprint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional

import numpy as np

from .curve import CurveForm


@dataclass(frozen=True)
class Problem:
    d: int
    n: int
    c: Optional[float] = None  # None = free (estimated each evaluation)
    restarts: int = 100
    seed: int = 0
    tol: float = 1e-9
    max_iter: int = 500

    def __post_init__(self):
        if self.d < 2 or self.n < 2:
            raise ValueError(f"need d >= 2 and n >= 2, got d={self.d}, n={self.n}")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.c is not None and self.c < 0:
            raise ValueError("fixed c must be non-negative")

    @property
    def c_free(self) -> bool:
        return self.c is None


@dataclass
class Solution:
    coeffs: np.ndarray  # (d, 2, n) complex
    residual: float
    c: float
    S: float
    fingerprint: np.ndarray = field(default=None)

    def singular_values(self) -> np.ndarray:
        return np.array(
            [np.sort(np.linalg.svd(A, compute_uv=False))[::-1]
             for A in self.coeffs]
        )


def make_fingerprint(coeffs: np.ndarray, c: float, S: float) -> np.ndarray:
    svs = [np.sort(np.linalg.svd(A, compute_uv=False))[::-1] for A in coeffs]
    return np.concatenate([np.concatenate(svs), [c, S]])


def fingerprint_distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(np.abs(a - b)))


# ---------------------------------------------------------------------------
# structure tensors (all static data for fixed (d, n), matmul-ready)


class _Structure:
    def __init__(self, d: int, n: int):
        self.d, self.n = d, n
        c2, c3, c4 = comb(n, 2), comb(n, 3), comb(n, 4)
        self.c2, self.c3, self.c4 = c2, c3, c4

        from .exterior import basis_indices, merge_indices, rank_of

        W2 = np.zeros((c2, n, n))
        for p in range(n):
            for q in range(n):
                if p == q:
                    continue
                idx, sign = merge_indices((p,), (q,))
                W2[rank_of(n, idx), p, q] = sign
        W3 = np.zeros((c3, c2, n))
        for K, pair in enumerate(basis_indices(n, 2)):
            for p in range(n):
                merged = merge_indices(pair, (p,))
                if merged is None:
                    continue
                idx, sign = merged
                W3[rank_of(n, idx), K, p] = sign
        W4 = np.zeros((c4, c2, c2))
        for K, pa in enumerate(basis_indices(n, 2)):
            for J, pb in enumerate(basis_indices(n, 2)):
                merged = merge_indices(pa, pb)
                if merged is None:
                    continue
                idx, sign = merged
                W4[rank_of(n, idx), K, J] = sign

        self.n_v = 2 * d - 1  # V_{u+2}, R_{u+2} at array slot u
        self.rows_u = 2 * d + 1
        self.rows_q = 4 * d - 1
        self.cols_u = 1 + 2 * n + c2
        self.cols_q = c2 + 2 * c3 + c4
        self.n_params = 2 * n * d

        # e_p ^ e_q pairing against the second / first slot
        self.W2_q = W2.reshape(c2 * n, n)  # rows (K,p), cols q
        self.W2_p = W2.transpose(0, 2, 1).reshape(c2 * n, n)  # rows (K,q), cols p
        self.W3_p = W3.reshape(c3 * c2, n)  # rows (L,K), cols p
        self.W3_K = W3.transpose(1, 0, 2).reshape(c2, c3 * n)  # rows K, cols (L,p)
        self.W4_J = W4.reshape(c4 * c2, c2)  # rows (O,K), cols J
        self.W4_K = W4.transpose(1, 0, 2).reshape(c2, c4 * c2)  # rows K, cols (O,J)

        # degree folding: conv2[u, (i,k)] = 1 iff i + k == u
        conv2 = np.zeros((self.n_v, d * d))
        for i in range(d):
            for k in range(d):
                conv2[i + k, i * d + k] = 1.0
        self.conv2 = conv2
        self.rscale = np.outer(
            np.arange(1, d + 1, dtype=float), np.arange(1, d + 1, dtype=float)
        ).reshape(-1)  # (i+1)(k+1) on the flat (i,k) axis

        # conv3[(w,v), i] = 1 iff v + i + 1 == w
        conv3 = np.zeros((self.rows_q, self.n_v, d))
        for v in range(self.n_v):
            for i in range(d):
                if v + i + 1 < self.rows_q:
                    conv3[v + i + 1, v, i] = 1.0
        self.conv3_f = conv3.reshape(self.rows_q * self.n_v, d)
        self.conv3_t = conv3.transpose(0, 2, 1).reshape(self.rows_q * d, self.n_v)

        # conv4[(w,v), u] = 1 iff v + u + 2 == w
        conv4 = np.zeros((self.rows_q, self.n_v, self.n_v))
        for v in range(self.n_v):
            for u in range(self.n_v):
                if v + u + 2 < self.rows_q:
                    conv4[v + u + 2, v, u] = 1.0
        self.conv4_f = conv4.reshape(self.rows_q * self.n_v, self.n_v)
        self.conv4_t = conv4.transpose(0, 2, 1).reshape(self.rows_q * self.n_v, self.n_v)

        self.lambda1 = np.zeros(self.rows_u)
        for k in range(d + 1):
            self.lambda1[k] = comb(d, k)
        self.lambda2_unit = np.zeros(self.rows_q)
        for k in range(2 * d - 3):
            self.lambda2_unit[k] = comb(2 * d - 4, k)


@lru_cache(maxsize=None)
def _structure(d: int, n: int) -> _Structure:
    return _Structure(d, n)


def _coerce_coeffs(coeffs, problem: Problem) -> np.ndarray:
    A = np.asarray(coeffs, dtype=complex)
    if A.shape != (problem.d, 2, problem.n):
        raise ValueError(
            f"coefficient shape {A.shape} does not match "
            f"({problem.d}, 2, {problem.n})"
        )
    if not np.all(np.isfinite(A.view(float))):
        raise ValueError("coefficients must be finite")
    return A


def _assemble_values(A: np.ndarray, st: _Structure):
    """U, Q plus the intermediate block polynomials (for Jacobian reuse)."""
    d, n = st.d, st.n
    A1, A2 = A[:, 0, :], A[:, 1, :]

    # B2[k, K, p] = sum_q W2[K,p,q] A2[k,q]; B1[i, K, q] = sum_p W2[K,p,q] A1[i,p]
    B2 = (A2 @ st.W2_q.T).reshape(d, st.c2, n)
    B1 = (A1 @ st.W2_p.T).reshape(d, st.c2, n)

    # pairwise wedge values: VT[i, k, K] = sum_p A1[i,p] * B2[k, K, p]
    VT = np.tensordot(A1, B2, axes=([1], [2]))  # (i, k, K)
    Vfull = st.conv2 @ VT.reshape(d * d, st.c2)
    Rfull = st.conv2 @ (st.rscale[:, None] * VT.reshape(d * d, st.c2))

    # E3a[(L,K), i] = sum_p W3[L,K,p] A1[i,p]; FS[(w,v),(L,K)]
    FS = (st.conv3_f @ (st.W3_p @ A1.T).T).reshape(
        st.rows_q, st.n_v, st.c3, st.c2
    )
    FS_m = FS.transpose(0, 2, 1, 3).reshape(st.rows_q * st.c3, st.n_v * st.c2)
    Sfull = (FS_m @ Rfull.reshape(-1)).reshape(st.rows_q, st.c3)

    FT = (st.conv3_f @ (st.W3_p @ A2.T).T).reshape(
        st.rows_q, st.n_v, st.c3, st.c2
    )
    FT_m = FT.transpose(0, 2, 1, 3).reshape(st.rows_q * st.c3, st.n_v * st.c2)
    Tfull = (FT_m @ Rfull.reshape(-1)).reshape(st.rows_q, st.c3)

    # FXr[(O,K), u] = sum_J W4[O,K,J] V[u,J]; FX over conv4 -> dR chain core
    FXr = st.W4_J @ Vfull.T  # (c4*c2, n_v)
    FX = (st.conv4_f @ FXr.T).reshape(st.rows_q, st.n_v, st.c4, st.c2)
    FX_m = FX.transpose(0, 2, 1, 3).reshape(st.rows_q * st.c4, st.n_v * st.c2)
    Xfull = (FX_m @ Rfull.reshape(-1)).reshape(st.rows_q, st.c4)

    U = np.zeros((st.rows_u, st.cols_u), dtype=complex)
    U[0, 0] = 1.0
    U[1 : d + 1, 1 : 1 + n] = A1
    U[1 : d + 1, 1 + n : 1 + 2 * n] = A2
    U[2:, 1 + 2 * n :] = Vfull

    Q = np.zeros((st.rows_q, st.cols_q), dtype=complex)
    c2, c3 = st.c2, st.c3
    Q[: st.n_v, :c2] = Rfull
    Q[:, c2 : c2 + c3] = Sfull
    Q[:, c2 + c3 : c2 + 2 * c3] = Tfull
    Q[:, c2 + 2 * c3 :] = Xfull

    inter = (B1, B2, Vfull, Rfull, FS_m, FT_m, FX_m)
    return U, Q, inter


def _block_grad(dblock: np.ndarray, conjQ: np.ndarray) -> np.ndarray:
    """G[r, s, X] = sum_c dblock[r, c, X] * conjQ[s, c] for one column block."""
    rows, width, P = dblock.shape
    out = dblock.transpose(0, 2, 1).reshape(rows * P, width) @ conjQ.T
    return out.reshape(rows, P, conjQ.shape[0]).transpose(0, 2, 1)


def _assemble_jacobian(A: np.ndarray, st: _Structure, U, Q, inter):
    """Holomorphic gradients GU[r,s,X], GQ[r,s,X] of the Gram matrices."""
    d, n, P = st.d, st.n, st.n_params
    B1, B2, Vfull, Rfull, FS_m, FT_m, FX_m = inter
    A1, A2 = A[:, 0, :], A[:, 1, :]
    sc = np.arange(1, d + 1, dtype=float)

    # dV[u, K, (b, slot, col)]
    dV = np.zeros((st.n_v, st.c2, d, 2, n), dtype=complex)
    dR = np.zeros_like(dV)
    for b in range(d):
        dV[b : b + d, :, b, 0, :] = B2
        dV[b : b + d, :, b, 1, :] = B1
        dR[b : b + d, :, b, 0, :] = (b + 1) * sc[:, None, None] * B2
        dR[b : b + d, :, b, 1, :] = (b + 1) * sc[:, None, None] * B1
    dVf = dV.reshape(st.n_v, st.c2, P)
    dRf = dR.reshape(st.n_v, st.c2, P)

    # S/T: chain through R plus the direct frame slot
    dS = (FS_m @ dRf.reshape(st.n_v * st.c2, P)).reshape(st.rows_q, st.c3, P)
    G3 = (Rfull @ st.W3_K).reshape(st.n_v, st.c3, n)  # sum_K W3[L,K,p] R[v,K]
    dir3 = (st.conv3_t @ G3.reshape(st.n_v, st.c3 * n)).reshape(
        st.rows_q, d, st.c3, n
    )
    dS_dir = np.zeros((st.rows_q, st.c3, d, 2, n), dtype=complex)
    dS_dir[:, :, :, 0, :] = dir3.transpose(0, 2, 1, 3)
    dS = dS + dS_dir.reshape(st.rows_q, st.c3, P)

    dT = (FT_m @ dRf.reshape(st.n_v * st.c2, P)).reshape(st.rows_q, st.c3, P)
    dT_dir = np.zeros((st.rows_q, st.c3, d, 2, n), dtype=complex)
    dT_dir[:, :, :, 1, :] = dir3.transpose(0, 2, 1, 3)
    dT = dT + dT_dir.reshape(st.rows_q, st.c3, P)

    # X: chain through R and through V
    dX = (FX_m @ dRf.reshape(st.n_v * st.c2, P)).reshape(st.rows_q, st.c4, P)
    GX = (Rfull @ st.W4_K).reshape(st.n_v, st.c4, st.c2)  # (v, O, J)
    FXv = (st.conv4_t @ GX.reshape(st.n_v, st.c4 * st.c2)).reshape(
        st.rows_q, st.n_v, st.c4, st.c2
    )
    FXv_m = FXv.transpose(0, 2, 1, 3).reshape(st.rows_q * st.c4, st.n_v * st.c2)
    dX = dX + (FXv_m @ dVf.reshape(st.n_v * st.c2, P)).reshape(
        st.rows_q, st.c4, P
    )

    conjU = np.conj(U)
    conjQ = np.conj(Q)

    GU = np.zeros((st.rows_u, st.rows_u, P), dtype=complex)
    # W-part: parameter block alpha occupies flat indices [(a-1)*2n, a*2n)
    for alpha in range(1, d + 1):
        GU[alpha, :, (alpha - 1) * 2 * n : alpha * 2 * n] = conjU[:, 1 : 1 + 2 * n]
    GU[2:, :, :] += _block_grad(dVf, conjU[:, 1 + 2 * n :])

    GQ = np.zeros((st.rows_q, st.rows_q, P), dtype=complex)
    c2, c3 = st.c2, st.c3
    GQ[: st.n_v] += _block_grad(dRf, conjQ[:, :c2])
    GQ += _block_grad(dS, conjQ[:, c2 : c2 + c3])
    GQ += _block_grad(dT, conjQ[:, c2 + c3 : c2 + 2 * c3])
    GQ += _block_grad(dX, conjQ[:, c2 + 2 * c3 :])
    return GU, GQ


def _estimate_c(Q: np.ndarray) -> float:
    """Free-mode c from the first Q row: |Q_0|^2 / C(2d-4, 0)."""
    return float(np.real(np.vdot(Q[0], Q[0])))


def _deviations(U, Q, problem: Problem, st: _Structure):
    MU = U @ U.conj().T
    MU[np.diag_indices_from(MU)] -= st.lambda1
    c = problem.c if not problem.c_free else _estimate_c(Q)
    MQ = Q @ Q.conj().T
    MQ[np.diag_indices_from(MQ)] -= c * st.lambda2_unit
    return MU, MQ, c


def _value_only(A: np.ndarray, problem: Problem, st: _Structure):
    U, Q, _ = _assemble_values(A, st)
    MU, MQ, c = _deviations(U, Q, problem, st)
    f = float(np.sum(np.abs(MU) ** 2) + np.sum(np.abs(MQ) ** 2))
    return f, c


def residual(coeffs, problem: Problem) -> float:
    """Sum of squared absolute deviations of UU* and QQ* from their targets."""
    A = _coerce_coeffs(coeffs, problem)
    st = _structure(problem.d, problem.n)
    return _value_only(A, problem, st)[0]


def _real_jacobian(M_grad):
    """Real Jacobian of [Re M; Im M] w.r.t. [Re A; Im A] from the holomorphic
    gradient M_grad[r, s, l] of a Hermitian-valued map."""
    swap = np.conj(np.swapaxes(M_grad, 0, 1))
    dM_dx = M_grad + swap
    dM_dy = 1j * (M_grad - swap)
    rows = M_grad.shape[0] * M_grad.shape[1]
    P = M_grad.shape[2]
    out = np.empty((2 * rows, 2 * P))
    out[:rows, :P] = dM_dx.real.reshape(rows, P)
    out[:rows, P:] = dM_dy.real.reshape(rows, P)
    out[rows:, :P] = dM_dx.imag.reshape(rows, P)
    out[rows:, P:] = dM_dy.imag.reshape(rows, P)
    return out


def _residual_vector_and_jacobian(A, problem: Problem, st: _Structure):
    U, Q, inter = _assemble_values(A, st)
    MU, MQ, c = _deviations(U, Q, problem, st)
    GU, GQ = _assemble_jacobian(A, st, U, Q, inter)

    JU = _real_jacobian(GU)
    JQ = _real_jacobian(GQ)

    if problem.c_free:
        # Lambda_2 = c(Q) * D with c = (QQ*)[0,0]; push its derivative through
        P = st.n_params
        dc_x = 2.0 * GQ[0, 0, :].real
        dc_y = -2.0 * GQ[0, 0, :].imag
        rows = MQ.shape[0]
        for k in range(rows):
            w = st.lambda2_unit[k]
            if w:
                JQ[k * rows + k, :P] -= w * dc_x
                JQ[k * rows + k, P:] -= w * dc_y

    r = np.concatenate(
        [
            MU.real.reshape(-1),
            MU.imag.reshape(-1),
            MQ.real.reshape(-1),
            MQ.imag.reshape(-1),
        ]
    )
    J = np.vstack([JU, JQ])
    return r, J, c


def gradient(coeffs, problem: Problem) -> np.ndarray:
    """Analytic gradient of `residual`, ordered [all Re entries, all Im entries].

    Entry order within each half is C-order over (degree alpha, row, column).
    """
    A = _coerce_coeffs(coeffs, problem)
    st = _structure(problem.d, problem.n)
    r, J, _ = _residual_vector_and_jacobian(A, problem, st)
    return 2.0 * (J.T @ r)


def _lm_minimize(A0: np.ndarray, problem: Problem, st: _Structure):
    """Levenberg-Marquardt: damping x2 on reject, /3 on accept, start 1e-3."""
    A = A0.copy()
    lam = 1e-3
    r, J, c = _residual_vector_and_jacobian(A, problem, st)
    f = float(r @ r)
    P = st.n_params
    for _ in range(problem.max_iter):
        if f < problem.tol:
            break
        g = J.T @ r
        if np.linalg.norm(g) < 1e-14:
            break
        H = J.T @ J
        eye = np.eye(H.shape[0])
        accepted = False
        step = None
        while lam < 1e12:
            try:
                step = np.linalg.solve(H + lam * eye, -g)
            except np.linalg.LinAlgError:
                lam *= 2.0
                continue
            A_new = A + (step[:P] + 1j * step[P:]).reshape(A.shape)
            f_new, _ = _value_only(A_new, problem, st)
            if f_new < f:
                A, f = A_new, f_new
                lam /= 3.0
                accepted = True
                break
            lam *= 2.0
        if not accepted:
            break
        r, J, c = _residual_vector_and_jacobian(A, problem, st)
        f = float(r @ r)
        if np.linalg.norm(step) < 1e-14 * (1.0 + np.linalg.norm(A)):
            break
    return A, f, c


def _initial_coeffs(problem: Problem, rng: np.random.Generator) -> np.ndarray:
    """Gaussian start with E|W_a|^2 = C(d, a)."""
    d, n = problem.d, problem.n
    A = np.empty((d, 2, n), dtype=complex)
    for alpha in range(1, d + 1):
        sigma = np.sqrt(comb(d, alpha) / (4.0 * n))
        block = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
        A[alpha - 1] = sigma * block
    return A


def _solution_S(c: float, d: int) -> float:
    return 8.0 - 16.0 * c / d**2 - 8.0 / d


FINGERPRINT_DEDUP_TOL = 1e-4


def solve(problem: Problem) -> list[Solution]:
    """Random-restart LM search; deduplicated, canonically ordered solutions."""
    st = _structure(problem.d, problem.n)
    found: list[Solution] = []
    for ridx in range(problem.restarts):
        rng = np.random.default_rng([problem.seed, ridx])
        A0 = _initial_coeffs(problem, rng)
        A, f, c = _lm_minimize(A0, problem, st)
        if not np.isfinite(f) or f >= problem.tol:
            continue
        S = _solution_S(c, problem.d)
        fp = make_fingerprint(A, c, S)
        if any(
            fingerprint_distance(fp, s.fingerprint) < FINGERPRINT_DEDUP_TOL
            for s in found
        ):
            continue
        found.append(Solution(coeffs=A, residual=f, c=c, S=S, fingerprint=fp))
    found.sort(key=lambda s: (s.residual, tuple(np.round(s.fingerprint, 12))))
    return found


def solution_to_curve(sol: Solution) -> CurveForm:
    mats = [
        [[complex(x) for x in row] for row in A] for A in np.asarray(sol.coeffs)
    ]
    return CurveForm(np.asarray(sol.coeffs).shape[2], "float", mats)


@dataclass(frozen=True)
class FamilyCandidate:
    """Necessary-condition match only; no congruence decision is implied."""

    t: float
    fingerprint_distance: float


FAMILY_C_TOL = 1e-4


def match_family(sol: Solution, problem: Problem) -> list[FamilyCandidate]:
    """Candidate family parameters for a (d=4, n=4) solution.

    The family's A_1 block has singular values sqrt(t), sqrt(4-t), so each
    squared singular value proposes a t; candidates must also reproduce c
    through c = 4t - t^2.  Distances to the exact family fingerprints are
    reported; these are necessary conditions only.
    """
    if problem.d != 4 or problem.n != 4:
        raise ValueError("family matching requires d=4, n=4")
    from .family import FamilyParam, family_curve, family_invariants

    A1 = np.asarray(sol.coeffs)[0]
    svals = np.linalg.svd(A1, compute_uv=False)
    out = []
    seen = set()
    for sv in svals:
        t = float(sv) ** 2
        if not 0 < t <= 3:
            continue
        if abs(sol.c - (4 * t - t * t)) > FAMILY_C_TOL:
            continue
        key = round(t, 6)
        if key in seen:
            continue
        seen.add(key)
        t_frac = Fraction(t).limit_denominator(10**6)
        if not 0 < t_frac <= 3:
            continue
        fam = family_curve(FamilyParam(t_frac)).to_float()
        pad = np.zeros((4, 2, 4), dtype=complex)
        for alpha in range(1, fam.m + 1):
            for i in (1, 2):
                pad[alpha - 1, i - 1] = [complex(x) for x in fam.row(alpha, i)]
        inv = family_invariants(FamilyParam(t_frac))
        fam_fp = make_fingerprint(pad, float(inv.c), float(inv.S))
        out.append(
            FamilyCandidate(
                t=t,
                fingerprint_distance=fingerprint_distance(sol.fingerprint, fam_fp),
            )
        )
    out.sort(key=lambda cand: cand.fingerprint_distance)
    return out
