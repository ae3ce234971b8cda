"""Scale profiles and the smoothness norm in its equivalent forms.

Forms: "direct" (variable-q Luxemburg norm of the profile over dt/t),
"discretized" (octave blocks in the mixed sequence space), "q0" (fixed
exponent q(0)), "peetre" (maximal-function profiles), and the local-mean
variants "local_mean_prime" / "local_mean_double_prime".  Every form is
level-0 term + t-norm of a profile; only the profile producer changes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .errors import HypothesisViolationError, ParameterError
from .exponents import ExponentField
from .frame import CalderonFrame, LocalMeanPair
from .grid import GridFunction, GridSpec, from_spectrum, spectrum
from .luxemburg import ScaleLadder, octave_block_norm, solve_luxemburg, t_norm

FORMS = ("direct", "discretized", "q0", "peetre",
         "local_mean_prime", "local_mean_double_prime")


@dataclass(frozen=True)
class ScaleProfile:
    """Per-node scalar values along the ladder plus the level-0 term."""

    ladder: ScaleLadder
    values: np.ndarray
    level0: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.ladder.t.shape:
            raise ParameterError("profile/ladder node mismatch")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ParameterError("profile values must be finite and nonnegative")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class BesovNormReport:
    form: str
    value: float
    profile: ScaleProfile
    parameters: Dict[str, object]

    def to_dict(self) -> dict:
        return {"form": self.form, "value": self.value,
                "level0": self.profile.level0,
                "parameters": dict(self.parameters)}


def _field_echo(field: Optional[ExponentField]) -> object:
    if field is None:
        return None
    if field.is_constant:
        return field.cached_min
    return {"min": field.cached_min, "max": field.cached_max,
            "limit": field.limit_value}


def _scale_weight(t: float, alpha: ExponentField) -> np.ndarray:
    """t^{-alpha(x)} on the grid (scalar for constant alpha)."""
    if alpha.is_constant:
        return np.asarray(t ** (-alpha.cached_min))
    return np.power(t, -alpha.grid_values())


def lp_profile(f: GridFunction, frame: CalderonFrame, alpha: ExponentField,
               p: ExponentField) -> ScaleProfile:
    """Profile t -> Luxemburg norm of t^{-alpha(.)} (phi_t * f)."""
    F = spectrum(f)
    h = f.spec.spacing ** f.spec.dimension
    pv = p.grid_values()
    vals = np.empty(frame.ladder.t.size)
    for i, t in enumerate(frame.ladder.t):
        band = from_spectrum(f.spec, frame.phi_t_spectrum(t) * F)
        g = band.abs_samples() * _scale_weight(t, alpha)
        vals[i] = solve_luxemburg(g, pv, h).value
    level0 = solve_luxemburg(np.abs(frame.level0_transform(f).samples), pv, h).value
    return ScaleProfile(frame.ladder, vals, level0)


# -- Peetre maximal machinery ---------------------------------------------------

_OFFSET_IDX: Dict[int, np.ndarray] = {}


def _offset_index(N: int) -> np.ndarray:
    idx = _OFFSET_IDX.get(N)
    if idx is None:
        ar = np.arange(N, dtype=np.int64)
        idx = ((ar[None, :] - ar[:, None]) % N).astype(np.int32)
        _OFFSET_IDX[N] = idx
    return idx


def peetre_maximal(spec: GridSpec, g: np.ndarray, t: float, a: float) -> np.ndarray:
    """max over grid y of g(y) / (1 + d(x,y)/t)^a with d the periodic distance.

    Exact O(M^2) maximum over all node pairs; 1-D uses a circulant gather,
    2-D falls back to row blocks.
    """
    g = np.asarray(g, dtype=float)
    if spec.dimension == 1:
        N = spec.points_per_axis
        off = np.arange(N) * spec.spacing
        d = np.minimum(off, spec.box_length - off)
        K = (1.0 + d / t) ** (-a)
        W = K[_offset_index(N)]
        W *= g.reshape(1, N)
        return W.max(axis=1)
    N = spec.points_per_axis
    L = spec.box_length
    x = spec.axis_coords()
    gf = g.reshape(-1)
    coords = spec.coords().reshape(-1, 2)
    out = np.empty(coords.shape[0])
    block = max(1, 2 ** 22 // coords.shape[0])
    for start in range(0, coords.shape[0], block):
        sl = slice(start, start + block)
        dx = np.abs(coords[sl, None, 0] - coords[None, :, 0])
        dy = np.abs(coords[sl, None, 1] - coords[None, :, 1])
        dx = np.minimum(dx, L - dx)
        dy = np.minimum(dy, L - dy)
        W = (1.0 + np.sqrt(dx ** 2 + dy ** 2) / t) ** (-a)
        out[sl] = (W * gf[None, :]).max(axis=1)
    return out.reshape(spec.shape)


def _check_peetre_order(a: float, p: ExponentField, spec: GridSpec) -> None:
    if a <= spec.dimension / p.cached_min:
        warnings.warn(
            f"Peetre order a = {a} is not above n/p- = {spec.dimension / p.cached_min:g}; "
            "the maximal-function equivalence is outside its hypothesis",
            stacklevel=3,
        )


def peetre_profile(f: GridFunction, frame: CalderonFrame, alpha: ExponentField,
                   a: float, p: ExponentField) -> ScaleProfile:
    """Profile of Luxemburg norms of the Peetre maximal functions."""
    _check_peetre_order(a, p, f.spec)
    F = spectrum(f)
    h = f.spec.spacing ** f.spec.dimension
    pv = p.grid_values()
    vals = np.empty(frame.ladder.t.size)
    for i, t in enumerate(frame.ladder.t):
        band = from_spectrum(f.spec, frame.phi_t_spectrum(t) * F).abs_samples()
        g = band * _scale_weight(t, alpha)
        vals[i] = solve_luxemburg(peetre_maximal(f.spec, g, t, a), pv, h).value
    g0 = np.abs(frame.level0_transform(f).samples)
    level0 = solve_luxemburg(peetre_maximal(f.spec, g0, 1.0, a), pv, h).value
    return ScaleProfile(frame.ladder, vals, level0)


# -- the norm forms -------------------------------------------------------------


def besov_norm(f: GridFunction, frame: CalderonFrame, alpha: ExponentField,
               p: ExponentField, q: ExponentField, form: str = "direct",
               a: float = 2.0, profile: Optional[ScaleProfile] = None) -> BesovNormReport:
    """Smoothness norm of f in the requested form (level-0 term + t-norm).

    A precomputed profile for the same (f, frame, alpha, p) may be passed to
    avoid recomputing band transforms when evaluating several forms.
    """
    if form in ("local_mean_prime", "local_mean_double_prime"):
        raise ParameterError("local-mean forms go through local_mean_norm()")
    if form not in FORMS:
        raise ParameterError(f"unknown form {form!r}")
    if profile is not None:
        prof = profile
    elif form == "peetre":
        prof = peetre_profile(f, frame, alpha, a, p)
    else:
        prof = lp_profile(f, frame, alpha, p)
    if form == "discretized":
        tpart = octave_block_norm(prof.values, frame.ladder, q)
    elif form == "q0":
        tpart = t_norm(prof.values, q, frame.ladder, "q0")
    else:
        tpart = t_norm(prof.values, q, frame.ladder, "variable")
    params = {"alpha": _field_echo(alpha), "p": _field_echo(p), "q": _field_echo(q),
              "a": a if form == "peetre" else None,
              "frame": {"profile_order": frame.profile.params.order,
                        "octaves": frame.ladder.octaves,
                        "nodes_per_octave": frame.ladder.nodes_per_octave}}
    return BesovNormReport(form, prof.level0 + tpart, prof, params)


def local_mean_norm(f: GridFunction, pair: LocalMeanPair, alpha: ExponentField,
                    p: ExponentField, q: ExponentField, a: float,
                    variant: str, ladder: ScaleLadder) -> BesovNormReport:
    """Local-means norm: "double_prime" plain, "prime" Peetre-maximalized.

    Requires alpha+ < S+1 (hypothesis of the local-means characterization).
    """
    if variant not in ("prime", "double_prime"):
        raise ParameterError(f"unknown local-mean variant {variant!r}")
    if alpha.cached_max >= pair.S + 1:
        raise HypothesisViolationError(
            f"alpha+ = {alpha.cached_max:g} must be below S+1 = {pair.S + 1} "
            "for the local-means characterization")
    F = spectrum(f)
    h = f.spec.spacing ** f.spec.dimension
    pv = p.grid_values()
    sr = f.spec.freq_radius()
    vals = np.empty(ladder.t.size)
    if variant == "prime":
        _check_peetre_order(a, p, f.spec)
    for i, t in enumerate(ladder.t):
        band = from_spectrum(f.spec, pair.k_spectrum_at(t * sr) * F).abs_samples()
        g = band * _scale_weight(t, alpha)
        if variant == "prime":
            g = peetre_maximal(f.spec, g, t, a)
        vals[i] = solve_luxemburg(g, pv, h).value
    g0 = from_spectrum(f.spec, pair.k0_spectrum_at(sr) * F).abs_samples()
    if variant == "prime":
        g0 = peetre_maximal(f.spec, g0, 1.0, a)
    level0 = solve_luxemburg(g0, pv, h).value
    prof = ScaleProfile(ladder, vals, level0)
    tpart = t_norm(prof.values, q, ladder, "variable")
    form = "local_mean_prime" if variant == "prime" else "local_mean_double_prime"
    params = {"alpha": _field_echo(alpha), "p": _field_echo(p), "q": _field_echo(q),
              "a": a if variant == "prime" else None,
              "kernel": {"S": pair.S, "m": pair.m, "epsilon": pair.epsilon}}
    return BesovNormReport(form, level0 + tpart, prof, params)


def write_profile_csv(profile: ScaleProfile, path: str) -> None:
    """CSV of (t, value) rows for plotting, with the level-0 term at t = inf
    spelled as a leading comment row."""
    import csv as _csv
    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(["t", "value"])
        w.writerow(["level0", repr(float(profile.level0))])
        for t, v in zip(profile.ladder.t, profile.values):
            w.writerow([repr(float(t)), repr(float(v))])
