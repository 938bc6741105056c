"""Space descriptors, the angle parameter, and distance reductions.

A code in the Grassmannian G_{m,n}(K) with chordal distance d maps, through
its tuple of principal-angle lines, to a code in the m-fold product of
projective spaces P^{n-1}(K) with product angle theta = arccos sqrt(1 - d^2/m).
A Stiefel code with Euclidean distance d maps to a code in the m-fold product
of spheres S^{cn-1} with cos theta = 1 - d^2/(2m).  These conversions, and
the space grammar used by the command line, live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

FIELD_DEGREE = {"R": 1, "C": 2, "H": 4, "O": 8}

SPACE_GRAMMAR = (
    "sphere:<n> | proj:<F>:<n> | prod-sphere:<n>:<m> | prod-proj:<F>:<n>:<m> | "
    "grassmann:<F>:<m>:<n> | stiefel:<F>:<m>:<n>   with F in {R,C,H,O} "
    "(H only for proj, O only for proj with n=3; grassmann/stiefel take R or C)"
)


class SpaceParseError(ValueError):
    """A space string does not match the grammar."""


def field_degree(field: str) -> int:
    """Real degree c = [K : R]."""
    try:
        return FIELD_DEGREE[field]
    except KeyError:
        raise ValueError(f"unknown field {field!r}, expected one of R, C, H, O") from None


def _check_field(field: str, allowed: tuple[str, ...], where: str) -> None:
    field_degree(field)
    if field not in allowed:
        raise ValueError(f"{where} supports fields {'/'.join(allowed)}, got {field!r}")


@dataclass(frozen=True)
class Sphere:
    """Unit sphere S^{n-1} in R^n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"sphere needs n >= 2, got n={self.n}")


@dataclass(frozen=True)
class Projective:
    """Projective space P^{n-1}(K) of lines in K^n."""

    field: str
    n: int

    def __post_init__(self):
        _check_field(self.field, ("R", "C", "H", "O"), "projective space")
        if self.n < 2:
            raise ValueError(f"projective space needs n >= 2, got n={self.n}")
        if self.field == "O" and self.n != 3:
            raise ValueError("the octonion projective plane requires n = 3")


@dataclass(frozen=True)
class ProductSphere:
    """m-fold product of spheres S^{n-1}."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 2 or self.m < 1:
            raise ValueError(f"product sphere needs n >= 2 and m >= 1, got {self}")


@dataclass(frozen=True)
class ProductProjective:
    """m-fold product of projective spaces P^{n-1}(K)."""

    field: str
    n: int
    m: int

    def __post_init__(self):
        _check_field(self.field, ("R", "C", "H", "O"), "projective space")
        if self.n < 2 or self.m < 1:
            raise ValueError(f"product projective space needs n >= 2 and m >= 1, got {self}")
        if self.field == "O" and self.n != 3:
            raise ValueError("the octonion projective plane requires n = 3")


@dataclass(frozen=True)
class Grassmann:
    """Grassmannian of m-planes in K^n with the chordal distance."""

    field: str
    m: int
    n: int

    def __post_init__(self):
        _check_field(self.field, ("R", "C"), "the Grassmannian")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"grassmann needs 1 <= m <= n, got m={self.m}, n={self.n}")


@dataclass(frozen=True)
class Stiefel:
    """Stiefel manifold of orthonormal m-frames in K^n, Euclidean distance."""

    field: str
    m: int
    n: int

    def __post_init__(self):
        _check_field(self.field, ("R", "C"), "the Stiefel manifold")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"stiefel needs 1 <= m <= n, got m={self.m}, n={self.n}")


Space = Union[Sphere, Projective, ProductSphere, ProductProjective, Grassmann, Stiefel]


@dataclass(frozen=True)
class AngleSpec:
    """A product angle, stored through its authoritative cosine parameter.

    For sphere-type spaces t = cos(theta); for projective-type spaces
    t = cos^2(theta), so theta always lies in [0, pi/2] there.
    """

    kind: str  # "sphere" | "projective"
    t: float

    def __post_init__(self):
        if self.kind not in ("sphere", "projective"):
            raise ValueError(f"angle kind must be sphere or projective, got {self.kind!r}")
        lo = -1.0 if self.kind == "sphere" else 0.0
        if not lo - 1e-12 <= self.t <= 1.0 + 1e-12:
            raise ValueError(f"t={self.t} outside [{lo}, 1] for a {self.kind} angle")

    @property
    def theta(self) -> float:
        t = min(max(self.t, -1.0), 1.0)
        if self.kind == "sphere":
            return math.acos(t)
        return math.acos(math.sqrt(max(t, 0.0)))

    @classmethod
    def from_theta(cls, kind: str, theta: float) -> "AngleSpec":
        if kind == "sphere":
            return cls(kind, math.cos(theta))
        return cls(kind, math.cos(theta) ** 2)


def grassmann_to_product_angle(d: float, m: int) -> AngleSpec:
    """Angle of the product-projective image of a Grassmann code at distance d."""
    if not 0.0 <= d <= math.sqrt(m) + 1e-12:
        raise ValueError(f"chordal distance must lie in [0, sqrt(m)], got d={d}")
    return AngleSpec("projective", max(1.0 - d * d / m, 0.0))


def stiefel_to_product_angle(d: float, m: int) -> AngleSpec:
    """Angle of the product-sphere image of a Stiefel code at distance d."""
    if not 0.0 <= d <= 2.0 * math.sqrt(m) + 1e-12:
        raise ValueError(f"Stiefel distance must lie in [0, 2 sqrt(m)], got d={d}")
    return AngleSpec("sphere", max(1.0 - d * d / (2.0 * m), -1.0))


def product_angle_from_components(kind: str, thetas) -> AngleSpec:
    """Product angle from per-coordinate angles (mean of cosines/squares)."""
    if kind == "sphere":
        t = sum(math.cos(th) for th in thetas) / len(thetas)
    else:
        t = sum(math.cos(th) ** 2 for th in thetas) / len(thetas)
    return AngleSpec(kind, t)


def chordal_from_product_angle(angle: AngleSpec, m: int) -> float:
    """Chordal distance of an m-fold product code at the given angle.

    Projective products: sqrt(m (1 - t)) with t = cos^2 theta.  Sphere
    products: sqrt(2 m (1 - t)) with t = cos theta.
    """
    if angle.kind == "projective":
        return math.sqrt(max(m * (1.0 - angle.t), 0.0))
    return math.sqrt(max(2.0 * m * (1.0 - angle.t), 0.0))


def _int_token(tok: str, what: str, text: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SpaceParseError(
            f"bad {what} {tok!r} in space {text!r}; grammar: {SPACE_GRAMMAR}"
        ) from None


def parse_space(text: str) -> Space:
    """Parse a space string; raises SpaceParseError naming the grammar."""
    parts = text.strip().split(":")
    head = parts[0]
    try:
        if head == "sphere" and len(parts) == 2:
            return Sphere(_int_token(parts[1], "n", text))
        if head == "proj" and len(parts) == 3:
            return Projective(parts[1], _int_token(parts[2], "n", text))
        if head == "prod-sphere" and len(parts) == 3:
            return ProductSphere(_int_token(parts[1], "n", text), _int_token(parts[2], "m", text))
        if head == "prod-proj" and len(parts) == 4:
            return ProductProjective(
                parts[1], _int_token(parts[2], "n", text), _int_token(parts[3], "m", text)
            )
        if head == "grassmann" and len(parts) == 4:
            return Grassmann(parts[1], _int_token(parts[2], "m", text), _int_token(parts[3], "n", text))
        if head == "stiefel" and len(parts) == 4:
            return Stiefel(parts[1], _int_token(parts[2], "m", text), _int_token(parts[3], "n", text))
    except SpaceParseError:
        raise
    except ValueError as exc:
        raise SpaceParseError(f"invalid space {text!r}: {exc}; grammar: {SPACE_GRAMMAR}") from exc
    raise SpaceParseError(f"unrecognized space {text!r}; grammar: {SPACE_GRAMMAR}")


def space_label(space: Space) -> str:
    """Canonical string form, inverse of parse_space."""
    if isinstance(space, Sphere):
        return f"sphere:{space.n}"
    if isinstance(space, Projective):
        return f"proj:{space.field}:{space.n}"
    if isinstance(space, ProductSphere):
        return f"prod-sphere:{space.n}:{space.m}"
    if isinstance(space, ProductProjective):
        return f"prod-proj:{space.field}:{space.n}:{space.m}"
    if isinstance(space, Grassmann):
        return f"grassmann:{space.field}:{space.m}:{space.n}"
    if isinstance(space, Stiefel):
        return f"stiefel:{space.field}:{space.m}:{space.n}"
    raise TypeError(f"not a space: {space!r}")
