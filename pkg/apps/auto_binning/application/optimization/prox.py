"""
Proximal operators of the binning penalty.

The penalty of one group is lambda1 * TV(u) + lambda2 * w * ||u||_2 with
TV(u) = sum_k |u_{k+1} - u_k|. Its prox is the block soft-threshold of the
TV prox: TV is positively homogeneous, so radial shrinkage of the TV
solution keeps its optimality conditions.
"""
from collections.abc import Sequence

import numpy as np

from apps.auto_binning.domain import PenaltyParams


def prox_tv1d(v: np.ndarray, t: float) -> np.ndarray:
    """
    Exact minimiser of 1/2 ||u - v||^2 + t * sum_k |u_{k+1} - u_k|.

    Direct taut-string scan over the dual variable: it keeps lower and upper
    bounds (vmin, vmax) for the value of the current segment and emits a
    segment as soon as one bound can no longer be kept. Every segment is
    written with a single value, so merged entries are bit-identical.

    Args:
        v: Input vector, nonempty.
        t: Nonnegative penalty weight.

    Returns:
        np.ndarray: The prox, a new array.
    """
    v = np.asarray(v, dtype=np.float64)
    n = v.size
    if t <= 0.0 or n < 2 or np.all(v == v[0]):
        return v.copy()

    out = np.empty(n)
    k = k0 = kplus = kminus = 0
    umin, umax = t, -t
    vmin, vmax = v[0] - t, v[0] + t
    twice = 2.0 * t

    while True:
        # right boundary: close the last segment or force a jump
        while k == n - 1:
            if umin < 0.0:
                out[k0:kminus + 1] = vmin
                k = k0 = kminus = kminus + 1
                vmin = v[k]
                umin = t
                umax = vmin + umin - vmax
            elif umax > 0.0:
                out[k0:kplus + 1] = vmax
                k = k0 = kplus = kplus + 1
                vmax = v[k]
                umax = -t
                umin = vmax + umax - vmin
            else:
                vmin += umin / (k - k0 + 1)
                out[k0:k + 1] = vmin
                return out

        umin += v[k + 1] - vmin
        if umin < -t:
            # negative jump
            out[k0:kminus + 1] = vmin
            k = k0 = kplus = kminus = kminus + 1
            vmin = v[k]
            vmax = vmin + twice
            umin, umax = t, -t
            continue

        umax += v[k + 1] - vmax
        if umax > t:
            # positive jump
            out[k0:kplus + 1] = vmax
            k = k0 = kplus = kminus = kplus + 1
            vmax = v[k]
            vmin = vmax - twice
            umin, umax = t, -t
            continue

        k += 1
        if umin >= t:
            kminus = k
            vmin += (umin - t) / (kminus - k0 + 1)
            umin = t
        if umax <= -t:
            kplus = k
            vmax += (umax + t) / (kplus - k0 + 1)
            umax = -t


def prox_group(v: np.ndarray, t: float) -> np.ndarray:
    """
    Block soft-threshold: 0 if ||v||_2 <= t, else v * (1 - t / ||v||_2).
    """
    v = np.asarray(v, dtype=np.float64)
    if t <= 0.0:
        return v.copy()
    norm = float(np.linalg.norm(v))
    if norm <= t:
        return np.zeros_like(v)
    return v * (1.0 - t / norm)


def prox_penalty(
    beta: Sequence[np.ndarray],
    step: float,
    params: PenaltyParams,
) -> tuple[np.ndarray, ...]:
    """
    Prox of step * penalty, applied to every group independently.

    Group j maps to prox_group(prox_tv1d(beta_j, step * lambda1), step * lambda2 * w_j).
    The intercept is not part of `beta` and is never touched.

    Args:
        beta: Group coefficient vectors.
        step: Positive step size.
        params: Penalty weights; group_weights must match the number of groups.

    Returns:
        tuple[np.ndarray, ...]: The new group vectors.
    """
    if len(params.group_weights) != len(beta):
        raise ValueError(f"{len(params.group_weights)} group weights given for {len(beta)} groups")

    tv_threshold = step * params.lambda1
    return tuple(
        prox_group(prox_tv1d(group, tv_threshold), step * params.lambda2 * weight)
        for group, weight in zip(beta, params.group_weights)
    )
