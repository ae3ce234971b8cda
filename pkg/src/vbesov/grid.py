"""Uniform periodic grids and the spectral operations everything else runs on.

The periodic box [-L/2, L/2)^n stands in for R^n.  All convolutions are
circular with an h^n factor so that discrete results approximate the
continuous integrals; `spectrum`/`from_spectrum` expose samples of the
continuous Fourier transform (non-unitary, angular frequency) at the grid
frequencies 2*pi*k/L.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ParameterError

MAGIC = b"VBGF"
FORMAT_VERSION = 1


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L/2, L/2)^n with N samples per axis."""

    dimension: int
    box_length: float
    points_per_axis: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ParameterError(f"dimension must be 1 or 2, got {self.dimension}")
        if not (self.box_length > 0):
            raise ParameterError(f"box_length must be positive, got {self.box_length}")
        N = self.points_per_axis
        if not isinstance(N, (int, np.integer)) or not _is_power_of_two(int(N)) or N < 16:
            raise ParameterError(
                f"points_per_axis must be a power of two >= 16, got {N}"
            )

    @property
    def spacing(self) -> float:
        return self.box_length / self.points_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dimension

    def axis_coords(self) -> np.ndarray:
        """Node coordinates along one axis: -L/2 + i*h."""
        N, L = self.points_per_axis, self.box_length
        return -L / 2 + np.arange(N) * (L / N)

    def coords(self) -> np.ndarray:
        """Coordinate array: shape (N,) in 1-D, (N, N, 2) in 2-D."""
        x = self.axis_coords()
        if self.dimension == 1:
            return x
        X, Y = np.meshgrid(x, x, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def radius(self) -> np.ndarray:
        """|x| at every node (plain distance to the origin inside the box)."""
        if self.dimension == 1:
            return np.abs(self.axis_coords())
        c = self.coords()
        return np.sqrt(c[..., 0] ** 2 + c[..., 1] ** 2)

    def axis_freqs(self) -> np.ndarray:
        """Angular frequencies 2*pi*k/L along one axis, fftfreq layout."""
        return 2 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    def freq_radius(self) -> np.ndarray:
        """|xi| at every grid frequency."""
        xi = self.axis_freqs()
        if self.dimension == 1:
            return np.abs(xi)
        KX, KY = np.meshgrid(xi, xi, indexing="ij")
        return np.sqrt(KX ** 2 + KY ** 2)

    @property
    def nyquist(self) -> float:
        return np.pi / self.spacing


def make_grid(dimension: int, box_length: float, points_per_axis: int) -> GridSpec:
    """Validated grid constructor; node i maps to -L/2 + i*h."""
    return GridSpec(dimension, float(box_length), int(points_per_axis))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function on a GridSpec.

    Immutable after construction: the sample buffer is marked read-only, so
    instances are safe to share between concurrent workers.
    """

    spec: GridSpec
    samples: np.ndarray
    tag: Optional[str] = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.complex128)
        if arr.shape != self.spec.shape:
            if arr.size == self.spec.size:
                arr = arr.reshape(self.spec.shape)
            else:
                raise ParameterError(
                    f"samples shape {arr.shape} incompatible with grid {self.spec.shape}"
                )
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ParameterError("samples contain NaN/Inf")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def with_samples(self, samples: np.ndarray, tag: Optional[str] = None) -> "GridFunction":
        return GridFunction(self.spec, samples, tag if tag is not None else self.tag)

    def real_samples(self) -> np.ndarray:
        return self.samples.real

    def abs_samples(self) -> np.ndarray:
        return np.abs(self.samples)


def same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.spec != g.spec:
        raise ParameterError(f"grid mismatch: {f.spec} vs {g.spec}")


def from_callable(spec: GridSpec, fn, tag: Optional[str] = None) -> GridFunction:
    """Sample fn at the grid nodes (fn receives the coordinate array)."""
    if spec.dimension == 1:
        vals = fn(spec.axis_coords())
    else:
        c = spec.coords()
        vals = fn(c[..., 0], c[..., 1])
    return GridFunction(spec, np.asarray(vals, dtype=np.complex128), tag)


def zero_function(spec: GridSpec, tag: Optional[str] = None) -> GridFunction:
    return GridFunction(spec, np.zeros(spec.shape), tag)


# -- Fourier transform helpers ------------------------------------------------
#
# With x_i = -L/2 + i*h and xi_k = 2*pi*k/L, the rectangle-rule transform
#   FT(xi_k) = h^n sum_i f_i exp(-i xi_k . x_i)
# equals h^n * (-1)^(sum of raw indices... ) * fft(f); for even N the phase
# exp(+i pi k) reduces to (-1)^j with j the raw FFT index.


def _phase(spec: GridSpec) -> np.ndarray:
    N = spec.points_per_axis
    p = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    if spec.dimension == 1:
        return p
    return np.outer(p, p)


def spectrum(f: GridFunction) -> np.ndarray:
    """Continuous-FT samples at the grid frequencies (fftfreq layout)."""
    h = f.spec.spacing
    return (h ** f.spec.dimension) * _phase(f.spec) * np.fft.fftn(f.samples)


def from_spectrum(spec: GridSpec, ft: np.ndarray, tag: Optional[str] = None) -> GridFunction:
    """Inverse of `spectrum`."""
    h = spec.spacing
    samples = np.fft.ifftn(np.asarray(ft) * _phase(spec)) / (h ** spec.dimension)
    return GridFunction(spec, samples, tag)


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Circular convolution with L^1-correct scaling h^n * sum f(x_i) g(x - x_i)."""
    same_grid(f, g)
    h = f.spec.spacing
    # the (-1)^j factor is a half-box roll: offsets i-j index the centered box,
    # whose origin sits at sample N/2, not sample 0.
    prod = np.fft.fftn(f.samples) * np.fft.fftn(g.samples) * _phase(f.spec)
    out = np.fft.ifftn(prod) * h ** f.spec.dimension
    return GridFunction(f.spec, out, tag=None)


def spectral_derivative(f: GridFunction, order: Union[int, Sequence[int]]) -> GridFunction:
    """Derivative via frequency-domain multiplication by (i*xi)^order.

    The caller is responsible for f being band-limited relative to the grid;
    otherwise the result rings.
    """
    if isinstance(order, (int, np.integer)):
        if f.spec.dimension != 1:
            raise ParameterError("2-D derivatives need a multi-index, e.g. (1, 0)")
        orders = (int(order),)
    else:
        orders = tuple(int(o) for o in order)
    if len(orders) != f.spec.dimension or any(o < 0 for o in orders):
        raise ParameterError(f"bad derivative multi-index {order}")
    ft = spectrum(f)
    xi = f.spec.axis_freqs()
    if f.spec.dimension == 1:
        ft = ft * (1j * xi) ** orders[0]
    else:
        KX, KY = np.meshgrid(xi, xi, indexing="ij")
        ft = ft * (1j * KX) ** orders[0] * (1j * KY) ** orders[1]
    return from_spectrum(f.spec, ft)


def integrate(f: GridFunction, weight: Optional[GridFunction] = None) -> float:
    """Rectangle rule h^n sum f*w; exact for grid-constant functions."""
    h = f.spec.spacing
    vals = f.samples
    if weight is not None:
        same_grid(f, weight)
        w = weight.samples.real
        if np.any(w < 0):
            raise ParameterError("weight has negative samples")
        vals = vals * w
    return float(np.real(np.sum(vals)) * h ** f.spec.dimension)


# -- dyadic cubes -------------------------------------------------------------


@dataclass(frozen=True)
class DyadicCube:
    """Q_{v,m} = 2^{-v}(m + [0,1)^n); side length exactly 2^{-v}."""

    level: int
    index: Tuple[int, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ParameterError("cube level must be nonnegative")
        object.__setattr__(self, "index", tuple(int(i) for i in np.atleast_1d(self.index)))

    @property
    def side(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def corner(self) -> Tuple[float, ...]:
        return tuple(m * self.side for m in self.index)

    @property
    def center(self) -> Tuple[float, ...]:
        return tuple((m + 0.5) * self.side for m in self.index)


def cubes_per_axis(spec: GridSpec, level: int) -> int:
    """Number of level-`level` cubes along one axis of the box.

    Requires the cube lattice to align with the grid, i.e. 2^{-level} must be
    an integer multiple of h and L/2 an integer multiple of 2^{-level}.
    """
    side = 2.0 ** (-level)
    ratio = side / spec.spacing
    n_cubes = spec.box_length / side
    if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ParameterError(
            f"level {level} cubes (side {side}) do not align with grid spacing {spec.spacing}"
        )
    if abs(n_cubes - round(n_cubes)) > 1e-9:
        raise ParameterError(
            f"box length {spec.box_length} is not a multiple of the cube side {side}"
        )
    return int(round(n_cubes))


def cubes_in_box(spec: GridSpec, level: int) -> Iterator[DyadicCube]:
    """Iterate the dyadic cubes at `level` that tile the box."""
    n = cubes_per_axis(spec, level)
    m0 = -(n // 2)
    if spec.dimension == 1:
        for j in range(n):
            yield DyadicCube(level, (m0 + j,))
    else:
        for j in range(n):
            for k in range(n):
                yield DyadicCube(level, (m0 + j, m0 + k))


def cube_mask(spec: GridSpec, cube: DyadicCube) -> np.ndarray:
    """Boolean mask of grid nodes inside the cube (sharp, no smoothing)."""
    sl = []
    n = cubes_per_axis(spec, cube.level)
    spc = spec.points_per_axis // n  # samples per cube per axis
    for m in cube.index:
        j = m + n // 2
        if not (0 <= j < n):
            raise ParameterError(f"cube {cube} lies outside the box")
        sl.append(slice(j * spc, (j + 1) * spc))
    mask = np.zeros(spec.shape, dtype=bool)
    mask[tuple(sl)] = True
    return mask


# -- import / export ----------------------------------------------------------


def write_csv(f: GridFunction, path: str) -> None:
    """CSV columns: coordinate(s), re, im."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if f.spec.dimension == 1:
            w.writerow(["x", "re", "im"])
            for x, v in zip(f.spec.axis_coords(), f.samples):
                w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
        else:
            w.writerow(["x", "y", "re", "im"])
            c = f.spec.coords()
            flat_c = c.reshape(-1, 2)
            flat_v = f.samples.reshape(-1)
            for (x, y), v in zip(flat_c, flat_v):
                w.writerow([repr(float(x)), repr(float(y)),
                            repr(float(v.real)), repr(float(v.imag))])


def read_csv(path: str, spec: GridSpec) -> GridFunction:
    vals = []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        ncoord = len(header) - 2
        if ncoord != spec.dimension:
            raise ParameterError(f"CSV has {ncoord} coordinate columns, grid is {spec.dimension}-D")
        for row in r:
            vals.append(complex(float(row[-2]), float(row[-1])))
    arr = np.array(vals, dtype=np.complex128)
    if arr.size != spec.size:
        raise ParameterError(f"CSV has {arr.size} rows, grid needs {spec.size}")
    return GridFunction(spec, arr.reshape(spec.shape))


def write_raw(f: GridFunction, path: str) -> None:
    """Raw little-endian float64 (re, im) pairs after a small header."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", FORMAT_VERSION, f.spec.dimension, f.spec.points_per_axis))
        fh.write(struct.pack("<d", f.spec.box_length))
        flat = f.samples.reshape(-1)
        buf = np.empty(2 * flat.size, dtype="<f8")
        buf[0::2] = flat.real
        buf[1::2] = flat.imag
        fh.write(buf.tobytes())


def read_raw(path: str) -> GridFunction:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ParameterError(f"bad magic {magic!r}")
        version, dim, N = struct.unpack("<III", fh.read(12))
        if version != FORMAT_VERSION:
            raise ParameterError(f"unsupported format version {version}")
        (L,) = struct.unpack("<d", fh.read(8))
        spec = make_grid(dim, L, N)
        buf = np.frombuffer(fh.read(), dtype="<f8")
        if buf.size != 2 * spec.size:
            raise ParameterError("truncated raw grid file")
        arr = buf[0::2] + 1j * buf[1::2]
        return GridFunction(spec, arr.reshape(spec.shape))
