"""Seeded instance generation and the plain-text instance format.

Format (UTF-8)::

    # optional comment lines start with '#'
    n k gamma mode          <- mode is 'plane' or 'line'
    x y                     <- n lines, decimal literals

Random draws come from xoshiro256** seeded through splitmix64, so the same
``GeneratorSpec`` yields bit-identical coordinates on any platform that has
IEEE-754 doubles. Gaussian offsets use the Box-Muller transform.
"""

from __future__ import annotations

import enum
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .core import DispersionError, Instance, InvalidInstance, Mode, Point

_MASK = (1 << 64) - 1


class InvalidSpec(DispersionError):
    pass


class ParseError(DispersionError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class InvariantViolation(DispersionError):
    pass


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, r: int) -> int:
    return ((x << r) | (x >> (64 - r))) & _MASK


class Xoshiro256:
    """xoshiro256** with its four state words filled by splitmix64(seed)."""

    def __init__(self, seed: int):
        sm = seed & _MASK
        self.s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            self.s.append(out)

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def gauss(self, sigma: float) -> float:
        u1 = 1.0 - self.random()  # (0, 1]
        u2 = self.random()
        return sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] by rejection, free of modulo bias."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + r % span


class Family(str, enum.Enum):
    UNIFORM = "uniform"
    COLLINEAR = "collinear"
    GRID = "grid"
    CLUSTERED = "clustered"


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    n: int
    k: int
    gamma: int = 2
    seed: int = 0
    extent: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            raise InvalidSpec(f"unknown family {self.family!r}") from None
        if self.gamma not in (1, 2):
            raise InvalidSpec(f"gamma must be 1 or 2, got {self.gamma}")
        if not (self.gamma + 1 <= self.k <= self.n):
            raise InvalidSpec(f"need gamma+1 <= k <= n, got n={self.n} k={self.k}")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise InvalidSpec(f"extent must be positive, got {self.extent}")
        if not (0 <= self.seed <= _MASK):
            raise InvalidSpec("seed must fit in an unsigned 64-bit integer")


def generate(spec: GeneratorSpec) -> Instance:
    rng = Xoshiro256(spec.seed)
    n, L = spec.n, spec.extent
    mode = Mode.PLANE
    if spec.family is Family.UNIFORM:
        pts = [Point(rng.uniform(0, L), rng.uniform(0, L)) for _ in range(n)]
    elif spec.family is Family.COLLINEAR:
        pts = [Point(rng.uniform(0, L), 0.0) for _ in range(n)]
        mode = Mode.LINE
    elif spec.family is Family.GRID:
        side = math.isqrt(n - 1) + 1  # ceil(sqrt(n))
        step = L / (side - 1) if side > 1 else 0.0
        pts = [Point((i % side) * step, (i // side) * step) for i in range(n)]
    else:
        n_centers = -(-n // 5)
        centers = [(rng.uniform(0, L), rng.uniform(0, L)) for _ in range(n_centers)]
        sigma = L / 20
        pts = []
        for i in range(n):
            cx, cy = centers[i % n_centers]
            pts.append(Point(cx + rng.gauss(sigma), cy + rng.gauss(sigma)))
    return Instance(tuple(pts), spec.k, spec.gamma, mode)


def fixture_path(root: Union[str, Path], spec: GeneratorSpec) -> Path:
    return Path(root) / spec.family.value / f"{spec.n}_{spec.k}_{spec.gamma}_{spec.seed}.txt"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_instance(instance: Instance) -> bytes:
    lines = [f"{instance.n} {instance.k} {instance.gamma} {instance.mode.value}"]
    lines += [f"{_fmt(p.x)} {_fmt(p.y)}" for p in instance.points]
    return ("\n".join(lines) + "\n").encode("utf-8")


def instance_digest(instance: Instance) -> str:
    return "sha256:" + hashlib.sha256(write_instance(instance)).hexdigest()


def _parse_float(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(lineno, f"not a number: {tok!r}") from None
    if not math.isfinite(v):
        raise ParseError(lineno, f"non-finite coordinate {tok!r}")
    return v


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} is not an integer: {tok!r}") from None


def read_instance(source: Union[bytes, str, io.IOBase]) -> Instance:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(0, f"not UTF-8: {e}") from None

    header = None
    coords: list[tuple[float, float]] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if header is None:
            if len(toks) != 4:
                raise ParseError(lineno, f"header needs 'n k gamma mode', got {len(toks)} fields")
            n = _parse_int(toks[0], lineno, "n")
            k = _parse_int(toks[1], lineno, "k")
            gamma = _parse_int(toks[2], lineno, "gamma")
            if toks[3] not in ("plane", "line"):
                raise ParseError(lineno, f"mode must be 'plane' or 'line', got {toks[3]!r}")
            if n < 1:
                raise ParseError(lineno, f"n must be positive, got {n}")
            header = (n, k, gamma, Mode(toks[3]))
            continue
        if len(coords) == header[0]:
            raise ParseError(lineno, "trailing content after the last point")
        if len(toks) != 2:
            raise ParseError(lineno, f"expected 'x y', got {len(toks)} fields")
        coords.append((_parse_float(toks[0], lineno), _parse_float(toks[1], lineno)))

    if header is None:
        raise ParseError(0, "missing header")
    n, k, gamma, mode = header
    if len(coords) != n:
        raise ParseError(0, f"header declares {n} points, found {len(coords)}")
    try:
        return Instance(tuple(Point(x, y) for x, y in coords), k, gamma, mode)
    except InvalidInstance as e:
        raise InvariantViolation(str(e)) from None
