"""Variable exponent fields p(.), alpha(.), q(t) and their regularity constants.

A field is a sampled function together with cached extrema and estimated
log-Holder constants.  Spatial fields (kinds "p" and "alpha") live on a
GridSpec; "q_of_t" fields live on a log-spaced t-axis in (0, 1] and carry the
limit q(0) explicitly, turning "log-Holder continuous at the origin" into a
checkable inequality on that axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import AdmissibilityError, ParameterError
from .grid import GridSpec

MAX_PAIRS = 10 ** 6  # deterministic strided subsample cap for pair scans

KINDS = ("p", "alpha", "q_of_t")


def _pair_constant(coords: np.ndarray, values: np.ndarray) -> Tuple[float, tuple]:
    """max over sampled pairs of |g(x)-g(y)| * log(e + 1/|x-y|), with witness.

    Pairs are an all-pairs scan over a strided subsample (<= MAX_PAIRS pairs)
    plus all consecutive-sample pairs, so short-range jumps are never missed.
    """
    M = len(values)
    if M < 2:
        return 0.0, ()
    k = max(1, int(np.ceil(M / np.sqrt(MAX_PAIRS))))
    idx = np.arange(0, M, k)
    sub_c, sub_v = coords[idx], values[idx]
    if sub_c.ndim == 1:
        dist = np.abs(sub_c[:, None] - sub_c[None, :])
    else:
        dist = np.linalg.norm(sub_c[:, None, :] - sub_c[None, :, :], axis=-1)
    diff = np.abs(sub_v[:, None] - sub_v[None, :])
    with np.errstate(divide="ignore"):
        prod = np.where(dist > 0, diff * np.log(np.e + 1.0 / np.where(dist > 0, dist, 1.0)), 0.0)
    best = float(prod.max())
    i, j = np.unravel_index(int(prod.argmax()), prod.shape)
    witness = (idx[i], idx[j])

    # consecutive pairs at full resolution
    if coords.ndim == 1:
        d_adj = np.abs(np.diff(coords))
    else:
        d_adj = np.linalg.norm(np.diff(coords, axis=0), axis=-1)
    g_adj = np.abs(np.diff(values))
    ok = d_adj > 0
    if ok.any():
        prod_adj = g_adj[ok] * np.log(np.e + 1.0 / d_adj[ok])
        if prod_adj.max() > best:
            best = float(prod_adj.max())
            a = int(np.flatnonzero(ok)[int(prod_adj.argmax())])
            witness = (a, a + 1)
    return best, witness


@dataclass(frozen=True)
class ExponentField:
    """Sampled variable exponent with cached admissibility data."""

    kind: str
    coords: np.ndarray          # sample positions: x (spatial) or t in (0,1]
    samples: np.ndarray
    spec: Optional[GridSpec] = None
    limit_value: Optional[float] = None   # p_infty, or q(0) for q_of_t
    cached_min: float = 0.0
    cached_max: float = 0.0
    clog_local: float = 0.0
    clog_decay: Optional[float] = None
    witness_local: tuple = ()

    @property
    def is_constant(self) -> bool:
        return self.cached_max == self.cached_min

    def grid_values(self) -> np.ndarray:
        """Samples in the grid's native shape (spatial kinds only)."""
        if self.spec is None:
            return self.samples
        return self.samples.reshape(self.spec.shape)

    def value_at(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Evaluate a q_of_t field at arbitrary t by interpolation in log t.

        t below the sampled range returns values pulled toward q(0); t above
        returns the last sample.
        """
        if self.kind != "q_of_t":
            raise ParameterError("value_at is for q_of_t fields")
        logt = np.log(np.asarray(t, dtype=float))
        out = np.interp(logt, self._log_coords, self.samples)
        return float(out) if np.isscalar(t) else out

    @property
    def _log_coords(self) -> np.ndarray:
        return np.log(self.coords)


def make_exponent_field(
    samples: np.ndarray,
    kind: str,
    limit_value: Optional[float] = None,
    *,
    spec: Optional[GridSpec] = None,
    t_coords: Optional[np.ndarray] = None,
) -> ExponentField:
    """Build a field, validate admissibility, cache extrema and constants.

    Spatial kinds need `spec`; q_of_t needs `t_coords` in (0,1] and a finite
    limit_value = q(0).
    """
    if kind not in KINDS:
        raise ParameterError(f"unknown exponent kind {kind!r}")
    vals = np.asarray(samples, dtype=float).reshape(-1)
    if not np.all(np.isfinite(vals)):
        raise ParameterError("exponent samples contain NaN/Inf")

    if kind == "q_of_t":
        if t_coords is None:
            raise ParameterError("q_of_t fields need t_coords")
        t = np.asarray(t_coords, dtype=float).reshape(-1)
        if t.shape != vals.shape:
            raise ParameterError("t_coords and samples disagree in length")
        if np.any(t <= 0) or np.any(t > 1):
            raise ParameterError("q_of_t axis must lie in (0, 1]")
        if limit_value is None:
            raise ParameterError("q_of_t fields need limit_value = q(0)")
        order = np.argsort(t)
        coords = t[order]
        vals = vals[order]
    else:
        if spec is None:
            raise ParameterError(f"{kind}-kind fields need a GridSpec")
        if vals.size != spec.size:
            raise ParameterError(f"{vals.size} samples on a grid of {spec.size} nodes")
        coords = spec.coords().reshape(spec.size, -1).squeeze()

    if kind in ("p", "q_of_t"):
        if np.any(vals < 1):
            raise AdmissibilityError(f"{kind} exponent dips below 1 (min {vals.min()})")
        if kind == "q_of_t" and limit_value < 1:
            raise AdmissibilityError(f"q(0) = {limit_value} < 1")

    cmin, cmax = float(vals.min()), float(vals.max())
    if cmin == cmax and limit_value is None:
        limit_value = cmin

    clog_local, witness = _pair_constant(coords, vals)
    clog_decay = None
    if limit_value is not None:
        if kind == "q_of_t":
            clog_decay = float(np.max(np.abs(vals - limit_value) * np.log(np.e + 1.0 / coords)))
        else:
            r = np.abs(coords) if coords.ndim == 1 else np.linalg.norm(coords, axis=-1)
            clog_decay = float(np.max(np.abs(vals - limit_value) * np.log(np.e + r)))

    return ExponentField(
        kind=kind, coords=coords, samples=vals, spec=spec,
        limit_value=limit_value, cached_min=cmin, cached_max=cmax,
        clog_local=clog_local, clog_decay=clog_decay, witness_local=witness,
    )


def field_from_callable(spec: GridSpec, fn, kind: str,
                        limit_value: Optional[float] = None) -> ExponentField:
    coords = spec.coords()
    if spec.dimension == 1:
        vals = fn(coords)
    else:
        vals = fn(coords[..., 0], coords[..., 1])
    return make_exponent_field(np.broadcast_to(vals, spec.shape).reshape(-1),
                               kind, limit_value, spec=spec)


def q_field_from_callable(t_coords: np.ndarray, fn, q0: float) -> ExponentField:
    t = np.asarray(t_coords, dtype=float)
    return make_exponent_field(fn(t), "q_of_t", q0, t_coords=t)


def constant_field(spec: GridSpec, value: float, kind: str = "p") -> ExponentField:
    return make_exponent_field(np.full(spec.size, float(value)), kind, float(value), spec=spec)


def estimate_log_holder(g: ExponentField, require_decay: bool = False) -> Tuple[float, Optional[float]]:
    """(clog_local, clog_decay) as cached at construction.

    clog_local is the max over sampled pairs of |g(x)-g(y)| log(e + 1/|x-y|);
    clog_decay uses the stored limit value (p_infty or q(0)).
    """
    if g.samples.size < 2:
        raise ParameterError("need at least two samples to estimate constants")
    if require_decay and g.clog_decay is None:
        raise ParameterError("decay constant requested but limit_value is missing")
    return g.clog_local, g.clog_decay


def reciprocal_constants(g: ExponentField) -> Tuple[float, Optional[float]]:
    """log-Holder constants of 1/g, as needed by the damping factors gamma_m."""
    clog_local, _ = _pair_constant(g.coords, 1.0 / g.samples)
    clog_decay = None
    if g.limit_value is not None:
        inv_limit = 1.0 / g.limit_value
        if g.kind == "q_of_t":
            clog_decay = float(np.max(np.abs(1.0 / g.samples - inv_limit)
                                      * np.log(np.e + 1.0 / g.coords)))
        else:
            r = np.abs(g.coords) if g.coords.ndim == 1 else np.linalg.norm(g.coords, axis=-1)
            clog_decay = float(np.max(np.abs(1.0 / g.samples - inv_limit) * np.log(np.e + r)))
    return clog_local, clog_decay


@dataclass(frozen=True)
class ClassReport:
    is_Plog: bool
    is_log_holder_at_origin: bool
    witnesses: dict


def check_class(g: ExponentField) -> ClassReport:
    """Report membership in the admissible regularity class.

    With estimated constants the defining inequalities hold by construction,
    so the verdict is about finiteness of the constants plus presence of the
    limit value; the witnesses expose where the constants are attained.
    """
    finite_local = np.isfinite(g.clog_local)
    finite_decay = g.clog_decay is not None and np.isfinite(g.clog_decay)
    witnesses = {
        "clog_local": g.clog_local,
        "clog_decay": g.clog_decay,
        "worst_pair_indices": tuple(int(i) for i in g.witness_local),
    }
    if g.witness_local:
        i, j = g.witness_local
        witnesses["worst_pair"] = {
            "coord_a": np.asarray(g.coords[i]).tolist(),
            "coord_b": np.asarray(g.coords[j]).tolist(),
            "value_a": float(g.samples[i]),
            "value_b": float(g.samples[j]),
        }
    ok = bool(finite_local and finite_decay)
    return ClassReport(is_Plog=ok, is_log_holder_at_origin=ok, witnesses=witnesses)


# -- import / export ----------------------------------------------------------


def write_field_csv(g: ExponentField, path: str, sidecar: Optional[str] = None) -> None:
    """CSV of (coordinate, value); cached constants go to a JSON sidecar."""
    import csv as _csv
    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh)
        if g.coords.ndim == 1:
            w.writerow(["coord", "value"])
            for c, v in zip(g.coords, g.samples):
                w.writerow([repr(float(c)), repr(float(v))])
        else:
            w.writerow(["x", "y", "value"])
            for (x, y), v in zip(g.coords, g.samples):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(v))])
    if sidecar is not None:
        from .reporting import dump_json
        dump_json({
            "kind": g.kind,
            "min": g.cached_min,
            "max": g.cached_max,
            "limit_value": g.limit_value,
            "clog_local": g.clog_local,
            "clog_decay": g.clog_decay,
        }, sidecar)


def read_field_csv(path: str, kind: str, limit_value: Optional[float] = None,
                   spec: Optional[GridSpec] = None) -> ExponentField:
    """Rebuild a field from its CSV; spatial kinds need the grid back."""
    import csv as _csv
    coords, vals = [], []
    with open(path, newline="") as fh:
        r = _csv.reader(fh)
        header = next(r)
        for row in r:
            coords.append([float(x) for x in row[:-1]])
            vals.append(float(row[-1]))
    vals = np.asarray(vals)
    if kind == "q_of_t":
        return make_exponent_field(vals, kind, limit_value,
                                   t_coords=np.asarray(coords).reshape(-1))
    if spec is None:
        raise ParameterError("spatial fields need the grid to deserialize")
    return make_exponent_field(vals, kind, limit_value, spec=spec)
