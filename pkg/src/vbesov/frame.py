"""Continuous resolutions of unity, local-mean kernel pairs, and eta kernels.

The resolution is built from a nonnegative radial bump b supported in the
annulus 1/2 < |xi| < 2, parameterized in z = log2|xi| so that dilation is a
shift:
    Fphi(xi) = b(|xi|) / c_b,   c_b = int_0^inf b(u) du/u,
    FPhi(xi) = int_{|xi|}^inf Fphi(u) du/u   (= 1 at xi = 0),
which gives FPhi(xi) + int_0^1 Fphi(t xi) dt/t = 1 for every xi.

The bump is the polynomial (1 - z^2)^order.  Per-octave Gauss-Legendre then
integrates the profile exactly on every panel interior to the support, the
domain cut at t = 1 lands on a panel edge, and the only quadrature error of
the reproduction identity comes from the two panels containing the support
joints - measured below 1e-7 at the default order and ladder density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConstructionError, ParameterError
from .grid import GridFunction, GridSpec, from_spectrum, spectrum
from .luxemburg import ScaleLadder

RESIDUAL_TOL = 1e-6
SUPPORT_LEAK_TOL = 1e-12


@dataclass(frozen=True)
class BumpParams:
    """Radial profile b(z) = (1 - z^2)^order in z = log2|xi|.

    Low orders concentrate the kernel in space (smaller wraparound on the
    box); high orders smooth the support joints (smaller ladder-quadrature
    residual).  Order 6 at 12 nodes per octave keeps the identity residual
    near 2e-7 with the best spatial concentration of the passing shapes.
    """

    order: int = 6

    def __post_init__(self):
        if not (isinstance(self.order, int) and self.order >= 2):
            raise ParameterError("bump order must be an integer >= 2")


@dataclass(frozen=True)
class RadialProfile:
    """The normalized bump with closed-form tail integrals.

    All evaluations are exact polynomial evaluations in z = log2 s; nothing
    here depends on the ladder, so construction accuracy is decoupled from
    quadrature accuracy.
    """

    params: BumpParams
    coef: np.ndarray        # polynomial coefficients of b(z)
    integ: np.ndarray       # antiderivative of b
    integ2: np.ndarray      # antiderivative of b^2
    c_b: float              # int_0^inf b du/u = ln2 * int b(z) dz
    c2: float               # int_0^inf Fphi(u)^2 du/u

    def _z(self, s: np.ndarray) -> np.ndarray:
        pos = s > 0
        return np.where(pos, np.log2(np.where(pos, s, 1.0)), -2.0)

    def _tail(self, z: np.ndarray, integ: np.ndarray) -> np.ndarray:
        zc = np.clip(z, -1.0, 1.0)
        return npoly.polyval(1.0, integ) - npoly.polyval(zc, integ)

    def phi_hat(self, s) -> np.ndarray:
        """Fphi at radii s (vectorized)."""
        s = np.asarray(s, dtype=float)
        z = self._z(s)
        inside = np.abs(z) < 1.0
        out = np.zeros_like(s)
        out[inside] = npoly.polyval(z[inside], self.coef) / self.c_b
        return out

    def Phi_hat(self, s) -> np.ndarray:
        """FPhi at radii s; exactly 1 for s <= 1/2 (including s = 0)."""
        s = np.asarray(s, dtype=float)
        z = self._z(s)
        tail = self._tail(z, self.integ) * math.log(2.0) / self.c_b
        return np.where(z <= -1.0, 1.0, np.where(z >= 1.0, 0.0, tail))

    def psi_hat(self, s) -> np.ndarray:
        """Analysis kernel Fpsi = Fphi / c2, so int Fpsi Fphi du/u = 1."""
        return self.phi_hat(s) / self.c2

    def Psi_hat(self, s) -> np.ndarray:
        """Analysis level-0 kernel FPsi, defined by FPsi FPhi = tail of Fpsi Fphi."""
        s = np.asarray(s, dtype=float)
        z = self._z(s)
        tail2 = self._tail(z, self.integ2)
        tail1 = self._tail(z, self.integ)
        denom = self.c2 * self.c_b * tail1
        ratio = np.where(denom > 1e-300, tail2 / np.where(denom > 1e-300, denom, 1.0), 0.0)
        return np.where(z <= -1.0, 1.0, np.where(z >= 1.0, 0.0, ratio))


def build_radial_profile(params: BumpParams) -> RadialProfile:
    coef = npoly.polypow([1.0, 0.0, -1.0], params.order)
    integ = npoly.polyint(coef)
    integ2 = npoly.polyint(npoly.polymul(coef, coef))
    ln2 = math.log(2.0)
    T = float(npoly.polyval(1.0, integ) - npoly.polyval(-1.0, integ))
    T2 = float(npoly.polyval(1.0, integ2) - npoly.polyval(-1.0, integ2))
    c_b = ln2 * T
    c2 = ln2 * T2 / c_b ** 2
    return RadialProfile(params, np.asarray(coef), np.asarray(integ),
                         np.asarray(integ2), c_b, c2)


@dataclass(frozen=True)
class CalderonFrame:
    """Spectral data of a resolution of unity plus its scale ladder."""

    spec: GridSpec
    profile: RadialProfile
    ladder: ScaleLadder
    FPhi: np.ndarray               # FPhi at the grid frequencies
    annulus: Tuple[float, float]   # support of the Fphi profile
    residual: float                # measured identity residual on the band
    resolved_xi_max: float

    def phi_t_spectrum(self, t: float) -> np.ndarray:
        return self.profile.phi_hat(t * self.spec.freq_radius())

    def band_transform(self, f: GridFunction, t: float) -> GridFunction:
        """phi_t * f computed spectrally (identical to convolve with phi_t)."""
        if not (0 < t <= 1):
            raise ParameterError(f"t must lie in (0, 1], got {t}")
        return from_spectrum(f.spec, self.phi_t_spectrum(t) * spectrum(f))

    def level0_transform(self, f: GridFunction) -> GridFunction:
        """Phi * f."""
        return from_spectrum(f.spec, self.FPhi * spectrum(f))


def identity_residual(profile: RadialProfile, ladder: ScaleLadder,
                      xi_max: float, n_samples: int = 6000) -> float:
    """max over the band of |FPhi(xi) + sum_k Fphi(t_k xi) w_k - 1|."""
    s = np.geomspace(xi_max * 1e-4, xi_max, n_samples)
    total = profile.Phi_hat(s)
    for t, w in zip(ladder.t, ladder.weights):
        total = total + w * profile.phi_hat(t * s)
    return float(np.max(np.abs(total - 1.0)))


def build_resolution_of_unity(spec: GridSpec, ladder: ScaleLadder,
                              profile_params: BumpParams = BumpParams()) -> CalderonFrame:
    """Construct and certify a resolution of unity on the grid."""
    if ladder.nodes_per_octave < 2:
        raise ParameterError("ladder must resolve the annulus: nodes_per_octave >= 2")
    profile = build_radial_profile(profile_params)

    # the polynomial bump vanishes identically at |z| >= 1, so annulus leakage
    # can only come from evaluation error at the support edges
    leak = max(abs(float(profile.phi_hat(np.array([0.5]))[0])),
               abs(float(profile.phi_hat(np.array([2.0]))[0])))
    if leak > SUPPORT_LEAK_TOL:
        raise ConstructionError(f"profile leaks {leak:g} outside the annulus")

    resolved = 0.9 * min(spec.nyquist, 2.0 ** (ladder.octaves - 1))
    res = identity_residual(profile, ladder, resolved)
    if res > RESIDUAL_TOL:
        raise ConstructionError(
            f"frame identity residual {res:.3e} exceeds {RESIDUAL_TOL:g} on the "
            f"resolved band |xi| <= {resolved:.3g}; increase nodes_per_octave"
        )
    FPhi = profile.Phi_hat(spec.freq_radius())
    return CalderonFrame(spec, profile, ladder, FPhi, (0.5, 2.0), res, resolved)


def synthesize_phi_t(frame: CalderonFrame, t: float) -> GridFunction:
    """Spatial phi_t = t^{-n} phi(./t) via the inverse transform of Fphi(t xi)."""
    if not (0 < t <= 1):
        raise ParameterError(f"t must lie in (0, 1], got {t}")
    return from_spectrum(frame.spec, frame.phi_t_spectrum(t), tag=f"phi_t(t={t:g})")


def synthesize_Phi(frame: CalderonFrame) -> GridFunction:
    return from_spectrum(frame.spec, frame.FPhi, tag="Phi")


# -- local means ---------------------------------------------------------------


@dataclass(frozen=True)
class LocalMeanPair:
    """Kernels (k0, k) with Tauberian lower bounds and S vanishing moments.

    Fourier-side Gaussian family: Fk0(xi) = exp(-|xi|^2/(2 eps^2)) and
    Fk(xi) proportional to |xi|^{2m} exp(-|xi|^2/(2 eps^2)) with 2m >= S+1,
    peak-normalized to 1.  Fk vanishes to order 2m at the origin, so all
    moments of k through order 2m-1 vanish; spatially both kernels decay
    super-polynomially.
    """

    spec: GridSpec
    k0: GridFunction
    k: GridFunction
    S: int
    epsilon: float
    m: int
    certification: dict

    def k0_spectrum_at(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.exp(-s ** 2 / (2 * self.epsilon ** 2))

    def k_spectrum_at(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.m == 0:
            return self.k0_spectrum_at(s)
        peak = (2 * self.m) ** self.m * self.epsilon ** (2 * self.m) * math.exp(-self.m)
        return s ** (2 * self.m) * np.exp(-s ** 2 / (2 * self.epsilon ** 2)) / peak

    def band_transform(self, f: GridFunction, t: float) -> GridFunction:
        """k_t * f."""
        if not (0 < t <= 1):
            raise ParameterError(f"t must lie in (0, 1], got {t}")
        s = t * f.spec.freq_radius()
        return from_spectrum(f.spec, self.k_spectrum_at(s) * spectrum(f))

    def level0_transform(self, f: GridFunction) -> GridFunction:
        """k0 * f."""
        return from_spectrum(f.spec, self.k0_spectrum_at(f.spec.freq_radius()) * spectrum(f))


def build_local_mean_pair(spec: GridSpec, S: int, epsilon: float = 1.0) -> LocalMeanPair:
    """Gaussian-family local means with 2m >= S+1 vanishing moments on k."""
    if S < -1:
        raise ParameterError(f"moment order S must be >= -1, got {S}")
    if not (0 < 2 * epsilon <= 0.9 * spec.nyquist):
        raise ParameterError(
            f"epsilon {epsilon} incompatible with grid Nyquist {spec.nyquist:.3g}")
    m = max(0, math.ceil((S + 1) / 2))

    pair_stub = LocalMeanPair.__new__(LocalMeanPair)
    object.__setattr__(pair_stub, "spec", spec)
    object.__setattr__(pair_stub, "S", S)
    object.__setattr__(pair_stub, "epsilon", epsilon)
    object.__setattr__(pair_stub, "m", m)

    sr = spec.freq_radius()
    k0 = from_spectrum(spec, pair_stub.k0_spectrum_at(sr), tag="k0")
    k = from_spectrum(spec, pair_stub.k_spectrum_at(sr), tag="k")

    # certification: Tauberian lower bounds on dense radial samples + moments
    ball = np.linspace(0.0, 2 * epsilon * (1 - 1e-9), 512)
    annulus = np.linspace(epsilon / 2, 2 * epsilon, 512)
    tauberian_k0 = float(pair_stub.k0_spectrum_at(ball).min())
    tauberian_k = float(pair_stub.k_spectrum_at(annulus).min())

    h = spec.spacing ** spec.dimension
    moments = {}
    if spec.dimension == 1:
        x = spec.axis_coords()
        for beta in range(0, max(S, 0) + 2):
            moments[str(beta)] = float(np.real(np.sum(x ** beta * k.samples) * h))
    else:
        c = spec.coords()
        for b1 in range(0, max(S, 0) + 2):
            for b2 in range(0, max(S, 0) + 2 - b1):
                mom = float(np.real(np.sum(c[..., 0] ** b1 * c[..., 1] ** b2 * k.samples) * h))
                moments[f"{b1},{b2}"] = mom

    cert = {
        "tauberian_k0_min": tauberian_k0,
        "tauberian_k_min": tauberian_k,
        "moments_k": moments,
    }
    if tauberian_k0 <= 0 or tauberian_k <= 0:
        raise ConstructionError(f"Tauberian certification failed: {cert}")
    for key, mom in moments.items():
        order = sum(int(p) for p in key.split(","))
        if order <= S and abs(mom) > 1e-8:
            raise ConstructionError(f"moment {key} = {mom:g} exceeds 1e-8")

    return LocalMeanPair(spec, k0, k, S, epsilon, m, cert)


# -- eta kernels ---------------------------------------------------------------


def eta_kernel(spec: GridSpec, t: float, m: float) -> GridFunction:
    """eta_{t,m}(x) = t^{-n} (1 + |x|/t)^{-m} sampled on the centered box.

    Integrable regime only: m > n.  The discrete L1 mass (wraparound included)
    is available as integrate(abs(.)); in 1-D it approaches 2/(m-1) as the box
    grows.
    """
    if m <= spec.dimension:
        raise ParameterError(f"eta kernel needs m > n = {spec.dimension}, got m = {m}")
    if not (t > 0):
        raise ParameterError(f"t must be positive, got {t}")
    r = spec.radius()
    vals = t ** (-spec.dimension) * (1.0 + r / t) ** (-float(m))
    return GridFunction(spec, vals, tag=f"eta(t={t:g},m={m:g})")


def export_frame(frame: CalderonFrame, json_path: str, raw_path: str) -> None:
    """JSON header (profile, ladder, residual) + FPhi spectral samples in the
    raw grid format."""
    from .grid import write_raw
    from .reporting import dump_json
    dump_json({
        "profile_order": frame.profile.params.order,
        "annulus": list(frame.annulus),
        "residual": frame.residual,
        "resolved_xi_max": frame.resolved_xi_max,
        "ladder": {
            "octaves": frame.ladder.octaves,
            "nodes_per_octave": frame.ladder.nodes_per_octave,
            "t": frame.ladder.t.tolist(),
            "weights": frame.ladder.weights.tolist(),
        },
        "grid": {"dimension": frame.spec.dimension,
                 "box_length": frame.spec.box_length,
                 "points_per_axis": frame.spec.points_per_axis},
        "spectral_samples": raw_path,
    }, json_path)
    write_raw(GridFunction(frame.spec, frame.FPhi.astype(np.complex128)), raw_path)
