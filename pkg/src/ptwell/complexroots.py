"""Zero counting and location in the complex kappa plane.

The argument principle applied to the entire function H(kappa) =
kappa^2 F(kappa): the winding of arg H around a rectangle equals the
number of enclosed zeros (H has no poles).  Contour sampling is adaptive;
segments are bisected until every phase step is below pi/2, which makes
miscounts impossible short of a zero sitting on the contour itself (that
case dilates the rectangle and retries).

``breaking_search`` compares per-tile winding counts with the real
spectrum and certifies any excess zeros by Newton refinement.  A located
zero counts as off-axis only when its imaginary part exceeds the local
double-precision resolution of the dip it lives in; microscopically split
pairs below that resolution are indistinguishable from real pairs and are
left to the real-spectrum bookkeeping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContourError, ConvergenceError, InvalidModelError
from .secular import WellParameters, entire_secular, secular_scale

__all__ = [
    "ComplexRegion",
    "ZeroCount",
    "BreakingReport",
    "winding_count",
    "locate_complex_zero",
    "breaking_search",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ComplexRegion:
    """Axis-aligned rectangle in the kappa plane, kept off the origin."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not self.re_min > 0:
            raise InvalidModelError("re_min must be positive (origin zero of H is artificial)")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InvalidModelError("rectangle bounds must be ordered")
        if not (self.im_min < 0 < self.im_max):
            raise InvalidModelError("rectangle must straddle the real axis (im_min < 0 < im_max)")

    def dilated(self, factor: float) -> "ComplexRegion":
        cx = 0.5 * (self.re_min + self.re_max)
        cy = 0.5 * (self.im_min + self.im_max)
        hw = 0.5 * (self.re_max - self.re_min) * factor
        hh = 0.5 * (self.im_max - self.im_min) * factor
        return ComplexRegion(max(cx - hw, 0.25 * self.re_min), cx + hw, cy - hh, cy + hh)


@dataclass(frozen=True)
class ZeroCount:
    region: ComplexRegion
    winding: int
    samples_used: int
    boundary_min_modulus: float


def _contour_points(region: ComplexRegion, per_edge: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    bottom = region.re_min + (region.re_max - region.re_min) * t + 1j * region.im_min
    right = region.re_max + 1j * (region.im_min + (region.im_max - region.im_min) * t)
    top = region.re_max - (region.re_max - region.re_min) * t + 1j * region.im_max
    left = region.re_min + 1j * (region.im_max - (region.im_max - region.im_min) * t)
    return np.concatenate([bottom, right, top, left])


def _try_winding(p: WellParameters, region: ComplexRegion, max_samples: int):
    z = _contour_points(region, 64)
    h = entire_secular(p, z)
    min_mod = float(np.min(np.abs(h) / (np.abs(z) ** 2 * secular_scale(p, z) + 1e-300)))
    while True:
        h_next = np.roll(h, -1)
        steps = np.angle(h_next / h)
        bad = np.abs(steps) >= 0.5 * math.pi
        if not bad.any():
            total = float(np.sum(steps))
            w = total / (2.0 * math.pi)
            if abs(w - round(w)) > 0.05:
                raise ContourError(
                    f"winding {w:.4f} did not settle to an integer on {region}"
                )
            return int(round(w)), z.size, min_mod
        if z.size >= max_samples:
            raise ContourError(
                f"phase-step budget exhausted ({z.size} samples) on {region}; "
                "a zero is probably adjacent to the contour"
            )
        idx = np.where(bad)[0]
        mids = 0.5 * (z[idx] + z[(idx + 1) % z.size])
        hm = entire_secular(p, mids)
        z = np.insert(z, idx + 1, mids)
        h = np.insert(h, idx + 1, hm)
        min_mod = min(
            min_mod,
            float(np.min(np.abs(hm) / (np.abs(mids) ** 2 * secular_scale(p, mids) + 1e-300))),
        )


def winding_count(
    p: WellParameters, region: ComplexRegion, max_samples: int = 1 << 20
) -> ZeroCount:
    """Count zeros of H inside the rectangle by the argument principle.

    A contour passing numerically through a zero (relative |H| below 1e-12)
    dilates the rectangle by 1% and retries, up to 8 times.
    """
    current = region
    for attempt in range(9):
        try:
            w, used, min_mod = _try_winding(p, current, max_samples)
        except ContourError:
            if attempt == 8:
                raise
            current = current.dilated(1.01)
            continue
        if min_mod < 1e-12 and attempt < 8:
            current = current.dilated(1.01)
            continue
        if min_mod < 1e-12:
            raise ContourError(f"zero on contour persists after dilation on {region}")
        return ZeroCount(
            region=current, winding=w, samples_used=used, boundary_min_modulus=min_mod
        )
    raise ContourError(f"contour evaluation failed on {region}")


def _h_scale(p: WellParameters, z: complex) -> float:
    return (abs(z) ** 2 + 1.0) * secular_scale(p, z)


def locate_complex_zero(
    p: WellParameters,
    seed: complex,
    region: Optional[ComplexRegion] = None,
    max_iter: int = 100,
) -> complex:
    """Newton refinement of a zero of H from a complex seed.

    The derivative is a central difference with real step 1e-7 (1 + |kappa|)
    (H is analytic, so a real-direction stencil gives the complex
    derivative).  Converges when |H| < 1e-10 times the local scale.
    """
    z = complex(seed)
    for _ in range(max_iter):
        h = entire_secular(p, z)
        if abs(h) < 1e-10 * _h_scale(p, z):
            return z
        d = 1e-7 * (1.0 + abs(z))
        dh = (entire_secular(p, z + d) - entire_secular(p, z - d)) / (2.0 * d)
        if dh == 0:
            raise ConvergenceError(f"vanishing derivative at {z}")
        z = z - h / dh
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ConvergenceError("Newton iterate diverged to non-finite value")
        if region is not None:
            w = region.re_max - region.re_min
            hgt = region.im_max - region.im_min
            if (
                z.real < region.re_min - w
                or z.real > region.re_max + w
                or z.imag < region.im_min - hgt
                or z.imag > region.im_max + hgt
            ):
                raise ConvergenceError(f"Newton iterate escaped the enclosing region at {z}")
    raise ConvergenceError(f"no convergence after {max_iter} Newton steps from {seed}")


def _im_certification_threshold(p: WellParameters, z: complex) -> float:
    """Smallest |Im| defensible as off-axis at double precision near z.

    Noise in H is ~eps times the local term scale; near a (near-)double
    zero with curvature c2 the position resolution is sqrt(noise/|c2|).
    Anything below ~10x that, or below an absolute 1e-8 (1+|z|) floor,
    cannot be distinguished from a real pair.
    """
    x = z.real
    d = 1e-4 * (1.0 + abs(x))
    h0 = entire_secular(p, complex(x))
    c2 = (entire_secular(p, complex(x + d)) - 2 * h0 + entire_secular(p, complex(x - d))) / d**2
    noise = 64.0 * _EPS * _h_scale(p, complex(x))
    curv = max(abs(c2) / 2.0, 1e-300)
    return max(1e-8 * (1.0 + abs(z)), 10.0 * math.sqrt(noise / curv))


@dataclass(frozen=True)
class BreakingReport:
    parameters: WellParameters
    kappa_max: float
    strip_height: float
    real_root_count: int
    winding_total: int
    off_axis: tuple  # complex zeros, conjugate-paired
    tiles: tuple  # (re_lo, re_hi, winding, real_count) per tile


def breaking_search(
    p: WellParameters, kappa_max: float, strip_height: float = 0.5
) -> BreakingReport:
    """Census of zeros in the strip (0.1, kappa_max) x (-strip_height, strip_height).

    Tiles the strip into width ~1 rectangles with edges snapped away from
    real roots, counts zeros per tile, and compares with the real-spectrum
    records falling in the tile.  Excess zeros are hunted by Newton from
    seeds at the deep |F| dips and at generic off-axis points; a certified
    off-axis zero (imaginary part above the local resolution threshold) is
    reported together with its conjugate.
    """
    if not kappa_max > 1:
        raise InvalidModelError("kappa_max must exceed 1")
    if not strip_height > 0:
        raise InvalidModelError("strip_height must be positive")

    from .realroots import ScanConfig, compute_spectrum  # deferred: avoids import cycle

    re_lo = 0.1
    report = compute_spectrum(p, ScanConfig(kappa_max=kappa_max, kappa_min=re_lo))
    roots = report.kappas()

    edges = [re_lo]
    while edges[-1] + 1.0 < kappa_max - 0.5:
        # keep tile edges off the real roots: nudge until clear of them
        target = edges[-1] + 1.0
        while target < kappa_max - 0.3 and np.any(np.abs(roots - target) < 0.2):
            target += 0.25
        if target >= kappa_max - 0.3:
            break
        edges.append(target)
    edges.append(kappa_max)

    off_axis = []
    tiles = []
    winding_total = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        region = ComplexRegion(lo, hi, -strip_height, strip_height)
        try:
            zc = winding_count(p, region)
        except ContourError as exc:
            raise ContourError(f"tile ({lo:.4f}, {hi:.4f}): {exc}") from exc
        in_tile = int(np.sum((roots >= lo) & (roots < hi)))
        winding_total += zc.winding
        tiles.append((lo, hi, zc.winding, in_tile))
        excess = zc.winding - in_tile
        if excess <= 0:
            continue
        found = _hunt_off_axis(p, region, excess)
        for z in found:
            off_axis.append(z)
            off_axis.append(z.conjugate())
        if 2 * len(found) < excess:
            raise ContourError(
                f"tile ({lo:.4f}, {hi:.4f}): {excess} excess zeros, "
                f"only {2 * len(found)} certified"
            )

    off_axis.sort(key=lambda z: (z.real, z.imag))
    return BreakingReport(
        parameters=p,
        kappa_max=kappa_max,
        strip_height=strip_height,
        real_root_count=int(roots.size),
        winding_total=winding_total,
        off_axis=tuple(off_axis),
        tiles=tuple(tiles),
    )


def _hunt_off_axis(p: WellParameters, region: ComplexRegion, excess: int):
    """Locate and certify up to ``excess`` conjugate pairs inside region.

    Seeds: deep dips of |F| on the real segment, then a coarse grid of
    upper-half-plane points.  Returns certified zeros with Im > 0 only;
    conjugates are implied by symmetry.
    """
    found = []
    xs = np.linspace(region.re_min, region.re_max, 512)[1:-1]
    fabs = np.abs(entire_secular(p, xs.astype(complex))) / (xs**2)
    order = np.argsort(fabs)
    seeds = [complex(xs[i], 0.25 * region.im_max) for i in order[:6]]
    ys = (0.3, 0.7)
    xsg = np.linspace(region.re_min, region.re_max, 7)[1:-1]
    seeds += [complex(x, y * region.im_max) for y in ys for x in xsg]
    for seed in seeds:
        if 2 * len(found) >= excess:
            break
        try:
            z = locate_complex_zero(p, seed, region=region)
        except ConvergenceError:
            continue
        if not (region.re_min <= z.real <= region.re_max):
            continue
        if not (region.im_min <= z.imag <= region.im_max):
            continue
        if abs(z.imag) <= _im_certification_threshold(p, z):
            continue  # indistinguishable from a real (pair) root at this precision
        zu = complex(z.real, abs(z.imag))
        if any(abs(zu - w) < 1e-6 * (1 + abs(zu)) for w in found):
            continue
        found.append(zu)
    return found
