"""sRGB / Oklab / OKHSL conversions and embedding-driven cluster colors.

Implements the published Oklab forward/inverse transforms and the OKHSL
lightness/chroma mapping (toe curve, gamut cusp, smooth chroma scale), then
maps 2-D cluster embeddings onto OKHSL: angle becomes hue, normalized radius
becomes saturation, lightness stays fixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SpothullError, ValidationError

S_FIXED = 0.9
L_FIXED = 0.75
S_MIN = 0.35

# Permitted numerical excursion outside [0, 1]. Saturations just under 1 at
# hues where the gamut dips (non-convexity near blue) emit channels out of
# range by up to a few 1e-3; everywhere else excursions stay near 1e-16.
_CLAMP_SLACK = 5e-3


@dataclass(frozen=True)
class OkhslColor:
    h: float  # degrees, normalized to [0, 360)
    s: float
    l: float

    def __post_init__(self):
        for name in ("h", "s", "l"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"OKHSL component {name} must be finite")
        object.__setattr__(self, "h", self.h % 360.0)
        if not 0.0 <= self.s <= 1.0:
            raise ValidationError(f"saturation {self.s} outside [0, 1]")
        if not 0.0 <= self.l <= 1.0:
            raise ValidationError(f"lightness {self.l} outside [0, 1]")


@dataclass(frozen=True)
class ColorAssignment:
    cluster: int
    okhsl: OkhslColor
    srgb: tuple[float, float, float]
    hex: str


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _srgb_transfer(x: float) -> float:
    """Linear channel -> gamma-encoded channel."""
    if x <= 0.0031308:
        return 12.92 * x
    return 1.055 * (x ** (1.0 / 2.4)) - 0.055


def _srgb_transfer_inv(x: float) -> float:
    """Gamma-encoded channel -> linear channel."""
    if x <= 0.04045:
        return x / 12.92
    return ((x + 0.055) / 1.055) ** 2.4


def _linear_srgb_to_oklab(r: float, g: float, b: float):
    l = 0.4122214708 * r + 0.5363325363 * g + 0.0514459929 * b
    m = 0.2119034982 * r + 0.6806995451 * g + 0.1073969566 * b
    s = 0.0883024619 * r + 0.2817188376 * g + 0.6299787005 * b
    l_ = _cbrt(l)
    m_ = _cbrt(m)
    s_ = _cbrt(s)
    return (
        0.2104542553 * l_ + 0.7936177850 * m_ - 0.0040720468 * s_,
        1.9779984951 * l_ - 2.4285922050 * m_ + 0.4505937099 * s_,
        0.0259040371 * l_ + 0.7827717662 * m_ - 0.8086757660 * s_,
    )


def _oklab_to_linear_srgb(L: float, a: float, b: float):
    l_ = L + 0.3963377774 * a + 0.2158037573 * b
    m_ = L - 0.1055613458 * a - 0.0638541728 * b
    s_ = L - 0.0894841775 * a - 1.2914855480 * b
    l = l_ * l_ * l_
    m = m_ * m_ * m_
    s = s_ * s_ * s_
    return (
        +4.0767416621 * l - 3.3077115913 * m + 0.2309699292 * s,
        -1.2684380046 * l + 2.6097574011 * m - 0.3413193965 * s,
        -0.0041960863 * l - 0.7034186147 * m + 1.7076147010 * s,
    )


def _compute_max_saturation(a: float, b: float) -> float:
    """Max S = C/L with (a, b) unit chroma direction staying inside sRGB."""
    if -1.88170328 * a - 0.80936493 * b > 1:  # red channel clips first
        k0, k1, k2, k3, k4 = 1.19086277, 1.76576728, 0.59662641, 0.75515197, 0.56771245
        wl, wm, ws = 4.0767416621, -3.3077115913, 0.2309699292
    elif 1.81444104 * a - 1.19445276 * b > 1:  # green channel
        k0, k1, k2, k3, k4 = 0.73956515, -0.45954404, 0.08285427, 0.12541070, 0.14503204
        wl, wm, ws = -1.2684380046, 2.6097574011, -0.3413193965
    else:  # blue channel
        k0, k1, k2, k3, k4 = 1.35733652, -0.00915799, -1.15130210, -0.50559606, 0.00692167
        wl, wm, ws = -0.0041960863, -0.7034186147, 1.7076147010

    S = k0 + k1 * a + k2 * b + k3 * a * a + k4 * a * b

    # one Halley step against the clipping channel
    k_l = +0.3963377774 * a + 0.2158037573 * b
    k_m = -0.1055613458 * a - 0.0638541728 * b
    k_s = -0.0894841775 * a - 1.2914855480 * b
    l_ = 1.0 + S * k_l
    m_ = 1.0 + S * k_m
    s_ = 1.0 + S * k_s
    l, m, s = l_ ** 3, m_ ** 3, s_ ** 3
    l_dS = 3.0 * k_l * l_ * l_
    m_dS = 3.0 * k_m * m_ * m_
    s_dS = 3.0 * k_s * s_ * s_
    l_dS2 = 6.0 * k_l * k_l * l_
    m_dS2 = 6.0 * k_m * k_m * m_
    s_dS2 = 6.0 * k_s * k_s * s_
    f = wl * l + wm * m + ws * s
    f1 = wl * l_dS + wm * m_dS + ws * s_dS
    f2 = wl * l_dS2 + wm * m_dS2 + ws * s_dS2
    return S - f * f1 / (f1 * f1 - 0.5 * f * f2)


def _find_cusp(a: float, b: float):
    S_cusp = _compute_max_saturation(a, b)
    r, g, bl = _oklab_to_linear_srgb(1.0, S_cusp * a, S_cusp * b)
    L_cusp = _cbrt(1.0 / max(r, g, bl))
    return (L_cusp, L_cusp * S_cusp)


_SCAN_STEPS = 512
_BIG = 1e30  # stand-in for "no boundary crossing on this channel"


def _halley_boundary(a, b, L1, C1, L0, t):
    """Refine a gamut-boundary estimate t with damped Halley iterations."""
    dL = L1 - L0
    dC = C1
    k_l = +0.3963377774 * a + 0.2158037573 * b
    k_m = -0.1055613458 * a - 0.0638541728 * b
    k_s = -0.0894841775 * a - 1.2914855480 * b
    l_dt = dL + dC * k_l
    m_dt = dL + dC * k_m
    s_dt = dL + dC * k_s
    for _ in range(3):
        L = L0 * (1.0 - t) + t * L1
        C = t * C1
        l_ = L + C * k_l
        m_ = L + C * k_m
        s_ = L + C * k_s
        l, m, s = l_ ** 3, m_ ** 3, s_ ** 3
        ldt = 3.0 * l_dt * l_ * l_
        mdt = 3.0 * m_dt * m_ * m_
        sdt = 3.0 * s_dt * s_ * s_
        ldt2 = 6.0 * l_dt * l_dt * l_
        mdt2 = 6.0 * m_dt * m_dt * m_
        sdt2 = 6.0 * s_dt * s_dt * s_

        def channel(w_l, w_m, w_s):
            f = w_l * l + w_m * m + w_s * s - 1.0
            f1 = w_l * ldt + w_m * mdt + w_s * sdt
            f2 = w_l * ldt2 + w_m * mdt2 + w_s * sdt2
            denom = f1 * f1 - 0.5 * f * f2
            u = f1 / denom if denom != 0 else 0.0
            step = -f * u
            return step if u >= 0.0 else _BIG

        t_r = channel(4.0767416621, -3.3077115913, 0.2309699292)
        t_g = channel(-1.2684380046, 2.6097574011, -0.3413193965)
        t_b = channel(-0.0041960863, -0.7034186147, 1.7076147010)
        step = min(t_r, t_g, t_b)
        if step >= _BIG or not math.isfinite(step):
            break
        t += step
        if abs(step) < 1e-12:
            break
    return t


def _find_gamut_intersection(a, b, L1, C1, L0, cusp):
    """Largest t with L0 + t*(L1-L0), t*C1 still inside the sRGB gamut.

    The gamut is not convex in Oklab near blue: a constant-L chroma ray can
    leave, dip out, and re-enter, so the value of interest is the OUTER
    crossing; taking it keeps every in-gamut color at s <= 1, and since both
    conversion directions share this value the s <-> C maps stay exact
    inverses. A bisected sweep finds the outer segment, but sampling misses
    the conical corner spikes at the primaries, where the chord + Halley
    estimate is exact instead; the max of the two covers both shapes.
    """

    def clearance(t: float) -> float:
        L = L0 * (1.0 - t) + t * L1
        C = t * C1
        r, g, bl = _oklab_to_linear_srgb(L, C * a, C * b)
        return min(r, g, bl, 1.0 - r, 1.0 - g, 1.0 - bl)

    # gamut-triangle chord gives the scale; expand until definitely outside
    if ((L1 - L0) * cusp[1] - (cusp[0] - L0) * C1) <= 0:
        t_est = cusp[1] * L0 / (C1 * cusp[0] + cusp[1] * (L0 - L1))
    else:
        t_est = cusp[1] * (L0 - 1.0) / (C1 * (cusp[0] - 1.0) + cusp[1] * (L0 - L1))
    hi = max(t_est, 1e-6)
    for _ in range(60):
        if clearance(hi) < 0.0:
            break
        hi *= 1.5
    else:
        return hi

    # sweep past the first crossing to catch the re-entered segment
    horizon = 1.6 * hi
    step = horizon / _SCAN_STEPS
    lo = 0.0
    hi = step * (_SCAN_STEPS + 1)
    for j in range(_SCAN_STEPS, 0, -1):
        if clearance(j * step) >= 0.0:
            lo = j * step
            hi = (j + 1) * step
            break
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        if clearance(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    t_outer = 0.5 * (lo + hi)

    t_h = _halley_boundary(a, b, L1, C1, L0, max(t_est, 0.0))
    # accept the refined chord only if it truly sits on the boundary
    if math.isfinite(t_h) and t_h > t_outer and abs(clearance(t_h)) <= 2e-4:
        return t_h
    return t_outer


_K1 = 0.206
_K2 = 0.03
_K3 = (1.0 + _K1) / (1.0 + _K2)


def _toe(x: float) -> float:
    return 0.5 * (_K3 * x - _K1 + math.sqrt((_K3 * x - _K1) ** 2 + 4 * _K2 * _K3 * x))


def _toe_inv(x: float) -> float:
    return (x * x + _K1 * x) / (_K3 * (x + _K2))


def _to_ST(cusp):
    L, C = cusp
    return (C / L, C / (1.0 - L))


def _get_ST_mid(a: float, b: float):
    """Polynomial fit of gamut shape at 90% chroma, smooth in hue."""
    S = 0.11516993 + 1.0 / (
        7.44778970 + 4.15901240 * b
        + a * (-2.19557347 + 1.75198401 * b
               + a * (-2.13704948 - 10.02301043 * b
                      + a * (-4.24894561 + 5.38770819 * b + 4.69891013 * a)))
    )
    T = 0.11239642 + 1.0 / (
        1.61320320 - 0.68124379 * b
        + a * (0.40370612 + 0.90148123 * b
               + a * (-0.27087943 + 0.61223990 * b
                      + a * (0.00299215 - 0.45399568 * b - 0.14661872 * a)))
    )
    return (S, T)


def _get_Cs(L: float, a: float, b: float):
    cusp = _find_cusp(a, b)
    C_max = _find_gamut_intersection(a, b, L, 1.0, L, cusp)
    ST_max = _to_ST(cusp)
    k = C_max / min(L * ST_max[0], (1.0 - L) * ST_max[1])
    ST_mid = _get_ST_mid(a, b)
    C_a = L * ST_mid[0]
    C_b = (1.0 - L) * ST_mid[1]
    C_mid = 0.9 * k * math.sqrt(math.sqrt(1.0 / (1.0 / C_a ** 4 + 1.0 / C_b ** 4)))
    C_a = L * 0.4
    C_b = (1.0 - L) * 0.8
    C_0 = math.sqrt(1.0 / (1.0 / C_a ** 2 + 1.0 / C_b ** 2))
    return (C_0, C_mid, C_max)


def _clamp_unit(x: float) -> float:
    if x < 0.0:
        if x < -_CLAMP_SLACK:
            raise SpothullError(f"channel value {x} exceeds clamp slack")
        return 0.0
    if x > 1.0:
        if x > 1.0 + _CLAMP_SLACK:
            raise SpothullError(f"channel value {x} exceeds clamp slack")
        return 1.0
    return x


def oklab_from_srgb(rgb, linear: bool = False):
    """(L, a, b) for an sRGB triple; gamma input is linearized first."""
    r, g, b = (float(c) for c in rgb)
    for c in (r, g, b):
        if not (math.isfinite(c) and 0.0 <= c <= 1.0):
            raise ValidationError(f"sRGB component {c} outside [0, 1]")
    if not linear:
        r, g, b = _srgb_transfer_inv(r), _srgb_transfer_inv(g), _srgb_transfer_inv(b)
    return _linear_srgb_to_oklab(r, g, b)


def srgb_from_okhsl(c: OkhslColor):
    """Gamma-encoded sRGB triple in [0, 1] for an OKHSL color."""
    if c.l >= 1.0:
        return (1.0, 1.0, 1.0)
    if c.l <= 0.0:
        return (0.0, 0.0, 0.0)
    h = c.h / 360.0
    a_ = math.cos(2.0 * math.pi * h)
    b_ = math.sin(2.0 * math.pi * h)
    L = _toe_inv(c.l)
    C_0, C_mid, C_max = _get_Cs(L, a_, b_)

    mid = 0.8
    mid_inv = 1.25
    if c.s < mid:
        t = mid_inv * c.s
        k_1 = mid * C_0
        k_2 = 1.0 - k_1 / C_mid
        C = t * k_1 / (1.0 - k_2 * t)
    else:
        t = (c.s - mid) / (1.0 - mid)
        k_0 = C_mid
        k_1 = (1.0 - mid) * C_mid * C_mid * mid_inv * mid_inv / C_0
        k_2 = 1.0 - k_1 / (C_max - C_mid)
        C = k_0 + t * k_1 / (1.0 - k_2 * t)

    r, g, b = _oklab_to_linear_srgb(L, C * a_, C * b_)
    return (
        _clamp_unit(_srgb_transfer(_clamp_unit(r))),
        _clamp_unit(_srgb_transfer(_clamp_unit(g))),
        _clamp_unit(_srgb_transfer(_clamp_unit(b))),
    )


def okhsl_from_srgb(rgb) -> OkhslColor:
    L, a, b = oklab_from_srgb(rgb)
    C = math.sqrt(a * a + b * b)
    l = _clamp_unit(_toe(L))
    # forward-matrix float dust leaves grays with C ~ 1e-8; treat as achromatic
    if C < 1e-7:
        return OkhslColor(h=0.0, s=0.0, l=l)
    a_ = a / C
    b_ = b / C
    h = 0.5 + 0.5 * math.atan2(-b, -a) / math.pi
    C_0, C_mid, C_max = _get_Cs(L, a_, b_)

    mid = 0.8
    mid_inv = 1.25
    if C < C_mid:
        k_1 = mid * C_0
        k_2 = 1.0 - k_1 / C_mid
        t = C / (k_1 + k_2 * C)
        s = t * mid
    else:
        k_0 = C_mid
        k_1 = (1.0 - mid) * C_mid * C_mid * mid_inv * mid_inv / C_0
        k_2 = 1.0 - k_1 / (C_max - C_mid)
        t = (C - k_0) / (k_1 + k_2 * (C - k_0))
        s = mid + (1.0 - mid) * t
    # the fitted gamut edge undershoots slightly for some hues, so boundary
    # colors overshoot s=1 by up to ~1e-3; clamp wider than the rgb channels
    if not -5e-3 < s < 1.0 + 5e-3:
        raise SpothullError(f"saturation {s} exceeds clamp slack")
    return OkhslColor(h=(h * 360.0) % 360.0, s=min(1.0, max(0.0, s)), l=l)


def hex_from_srgb(rgb) -> str:
    """#rrggbb with round-half-up 8-bit quantization."""
    parts = []
    for c in rgb:
        q = int(math.floor(c * 255.0 + 0.5))
        parts.append(min(255, max(0, q)))
    return "#" + "".join(f"{p:02x}" for p in parts)


def colors_from_embedding(
    embedding,
    s_fixed: float = S_FIXED,
    l_fixed: float = L_FIXED,
    s_min: float = S_MIN,
) -> list[ColorAssignment]:
    """One ColorAssignment per cluster: angle -> hue, radius -> saturation."""
    pts = [(float(x), float(y)) for x, y in embedding]
    if not pts:
        raise ValidationError("embedding must contain at least one point")
    k = len(pts)
    cx = sum(p[0] for p in pts) / k
    cy = sum(p[1] for p in pts) / k
    centered = [(x - cx, y - cy) for x, y in pts]
    radii = [math.hypot(x, y) for x, y in centered]
    r_max = max(radii)

    out = []
    for i, ((x, y), r) in enumerate(zip(centered, radii)):
        if k == 1 or r_max == 0.0:
            h, s = 0.0, s_min
        else:
            h = math.degrees(math.atan2(y, x)) % 360.0
            s = max(s_min, s_fixed * (r / r_max))
        okhsl = OkhslColor(h=h, s=s, l=l_fixed)
        srgb = srgb_from_okhsl(okhsl)
        out.append(ColorAssignment(cluster=i, okhsl=okhsl, srgb=srgb, hex=hex_from_srgb(srgb)))
    return out
