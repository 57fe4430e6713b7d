"""TSPLIB instance parsing and the integer distance oracle.

Supports the symmetric-TSP subset needed here: EUC_2D and ATT coordinate
instances plus EXPLICIT matrices in FULL_MATRIX, UPPER_ROW or LOWER_DIAG_ROW
format. Distances follow the TSPLIB integer conventions (nearest-integer
Euclidean, pseudo-Euclidean ATT), so tour lengths are comparable with the
published optimum registry bundled under ``dynants/data``.
"""

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

SUPPORTED_EDGE_WEIGHT_TYPES = ("EUC_2D", "ATT", "EXPLICIT")
SUPPORTED_EXPLICIT_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_DIAG_ROW")


class TsplibParseError(ValueError):
    """Malformed or unsupported TSPLIB input, with line context."""


def nint(x: float) -> int:
    """TSPLIB nearest-integer rounding (0.5 rounds up)."""
    return int(x + 0.5)


@dataclass(eq=False)
class Instance:
    """An immutable symmetric TSP instance.

    ``coords`` is an (n, 2) float array for coordinate instances and None for
    EXPLICIT ones; ``weights`` is the full integer matrix for EXPLICIT
    instances. ``optimum`` is the registry's known best tour length, if any.
    """

    name: str
    dimension: int
    edge_weight_kind: str
    coords: np.ndarray | None = None
    weights: np.ndarray | None = None
    optimum: int | None = None
    _matrix: np.ndarray | None = field(default=None, repr=False, compare=False)
    _eta: np.ndarray | None = field(default=None, repr=False, compare=False)

    def distance(self, i: int, j: int) -> int:
        """Integer distance between cities ``i`` and ``j`` (0-based)."""
        n = self.dimension
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"city index out of range: ({i}, {j}), n={n}")
        if i == j:
            return 0
        if self.edge_weight_kind == "EXPLICIT":
            return int(self.weights[i, j])
        xi, yi = self.coords[i]
        xj, yj = self.coords[j]
        if self.edge_weight_kind == "EUC_2D":
            return nint(math.hypot(xi - xj, yi - yj))
        # ATT pseudo-Euclidean
        r = math.sqrt(((xi - xj) ** 2 + (yi - yj) ** 2) / 10.0)
        t = nint(r)
        return t + 1 if t < r else t

    def distance_matrix(self) -> np.ndarray:
        """Full (n, n) int64 distance matrix; cached, read-only."""
        if self._matrix is None:
            n = self.dimension
            if self.edge_weight_kind == "EXPLICIT":
                m = self.weights.astype(np.int64, copy=True)
            else:
                m = np.zeros((n, n), dtype=np.int64)
                for i in range(n):
                    for j in range(i + 1, n):
                        m[i, j] = m[j, i] = self.distance(i, j)
            m.flags.writeable = False
            self._matrix = m
        return self._matrix

    def visibility_matrix(self) -> np.ndarray:
        """Heuristic desirability 1/distance, zero on the diagonal; cached."""
        if self._eta is None:
            d = self.distance_matrix().astype(np.float64)
            eta = np.zeros_like(d)
            off = ~np.eye(self.dimension, dtype=bool)
            eta[off] = 1.0 / d[off]
            eta.flags.writeable = False
            self._eta = eta
        return self._eta


def distance(inst: Instance, i: int, j: int) -> int:
    return inst.distance(i, j)


def tour_length(inst: Instance, perm) -> int:
    """Length of the closed tour visiting ``perm`` in order.

    Raises ValueError if ``perm`` is not a permutation of all cities.
    """
    perm = np.asarray(perm, dtype=np.int64)
    n = inst.dimension
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm.tolist()}")
    d = inst.distance_matrix()
    return int(d[perm, np.roll(perm, -1)].sum())


def _parse_header_line(line: str) -> tuple[str, str] | None:
    if ":" in line:
        key, value = line.split(":", 1)
        return key.strip().upper(), value.strip()
    return None


def _read_numbers(lines, start, count, what):
    """Collect ``count`` numbers from whitespace-separated lines."""
    vals: list[float] = []
    i = start
    while len(vals) < count:
        if i >= len(lines):
            raise TsplibParseError(
                f"line {i}: unexpected end of file inside {what} "
                f"({len(vals)} of {count} values read)")
        stripped = lines[i].strip()
        if stripped.upper() in ("EOF", "DISPLAY_DATA_SECTION"):
            raise TsplibParseError(
                f"line {i + 1}: {what} ended early "
                f"({len(vals)} of {count} values read)")
        for tok in stripped.split():
            try:
                vals.append(float(tok))
            except ValueError as exc:
                raise TsplibParseError(
                    f"line {i + 1}: bad number {tok!r} in {what}") from exc
        i += 1
    if len(vals) > count:
        raise TsplibParseError(
            f"line {i}: {what} holds more values than expected "
            f"({len(vals)} > {count})")
    return vals, i


def parse_instance(text: str) -> Instance:
    """Parse TSPLIB file contents into an :class:`Instance`.

    Only symmetric instances with strictly positive off-diagonal distances
    are accepted; anything else is rejected up front so the solver never
    divides by a zero distance.
    """
    lines = text.splitlines()
    header: dict[str, str] = {}
    coords: np.ndarray | None = None
    explicit_values: list[float] | None = None

    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        if not stripped or stripped.upper() == "EOF":
            i += 1
            continue
        keyword = stripped.split(":")[0].strip().upper()
        if keyword == "NODE_COORD_SECTION":
            dim = _require_dimension(header, i)
            coords = np.zeros((dim, 2), dtype=np.float64)
            seen = np.zeros(dim, dtype=bool)
            i += 1
            for k in range(dim):
                if i >= len(lines) or lines[i].strip().upper() in ("", "EOF"):
                    raise TsplibParseError(
                        f"line {i}: NODE_COORD_SECTION lists {k} of {dim} cities "
                        "(dimension mismatch)")
                parts = lines[i].split()
                if len(parts) < 3:
                    raise TsplibParseError(
                        f"line {i + 1}: expected 'index x y', got {lines[i]!r}")
                try:
                    idx = int(float(parts[0])) - 1
                    x, y = float(parts[1]), float(parts[2])
                except ValueError as exc:
                    raise TsplibParseError(
                        f"line {i + 1}: bad coordinate line {lines[i]!r}") from exc
                if not (0 <= idx < dim):
                    raise TsplibParseError(
                        f"line {i + 1}: city index {idx + 1} outside 1..{dim}")
                coords[idx] = (x, y)
                seen[idx] = True
                i += 1
            if not seen.all():
                raise TsplibParseError(
                    f"line {i}: NODE_COORD_SECTION missing cities "
                    f"{list(np.flatnonzero(~seen) + 1)}")
            continue
        if keyword == "EDGE_WEIGHT_SECTION":
            dim = _require_dimension(header, i)
            fmt = header.get("EDGE_WEIGHT_FORMAT", "")
            count = {
                "FULL_MATRIX": dim * dim,
                "UPPER_ROW": dim * (dim - 1) // 2,
                "LOWER_DIAG_ROW": dim * (dim + 1) // 2,
            }.get(fmt)
            if count is None:
                raise TsplibParseError(
                    f"line {i + 1}: unsupported EDGE_WEIGHT_FORMAT {fmt!r} "
                    f"(supported: {', '.join(SUPPORTED_EXPLICIT_FORMATS)})")
            explicit_values, i = _read_numbers(lines, i + 1, count,
                                               "EDGE_WEIGHT_SECTION")
            continue
        if keyword == "DISPLAY_DATA_SECTION":
            dim = _require_dimension(header, i)
            i += 1 + dim
            continue
        parsed = _parse_header_line(stripped)
        if parsed is None:
            raise TsplibParseError(f"line {i + 1}: unrecognized line {stripped!r}")
        header[parsed[0]] = parsed[1]
        i += 1

    dim = _require_dimension(header, len(lines))
    if dim < 3:
        raise TsplibParseError(f"DIMENSION must be at least 3, got {dim}")
    kind = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if kind not in SUPPORTED_EDGE_WEIGHT_TYPES:
        raise TsplibParseError(
            f"unsupported EDGE_WEIGHT_TYPE {kind!r} "
            f"(supported: {', '.join(SUPPORTED_EDGE_WEIGHT_TYPES)})")
    name = header.get("NAME", "unnamed")

    if kind == "EXPLICIT":
        if explicit_values is None:
            raise TsplibParseError("EXPLICIT instance has no EDGE_WEIGHT_SECTION")
        weights = _assemble_matrix(explicit_values, dim,
                                   header["EDGE_WEIGHT_FORMAT"])
        inst = Instance(name=name, dimension=dim, edge_weight_kind=kind,
                        weights=weights, optimum=known_optimum(name))
    else:
        if coords is None:
            raise TsplibParseError(f"{kind} instance has no NODE_COORD_SECTION")
        coords.flags.writeable = False
        inst = Instance(name=name, dimension=dim, edge_weight_kind=kind,
                        coords=coords, optimum=known_optimum(name))

    d = inst.distance_matrix()
    off = ~np.eye(dim, dtype=bool)
    if (d[off] <= 0).any():
        bad = np.argwhere((d <= 0) & off)[0]
        raise TsplibParseError(
            f"instance {name!r} has non-positive distance between cities "
            f"{bad[0] + 1} and {bad[1] + 1}; visibility would be undefined")
    return inst


def _require_dimension(header: dict[str, str], line_no: int) -> int:
    raw = header.get("DIMENSION")
    if raw is None:
        raise TsplibParseError(f"line {line_no + 1}: DIMENSION not declared yet")
    try:
        return int(raw)
    except ValueError as exc:
        raise TsplibParseError(f"bad DIMENSION value {raw!r}") from exc


def _assemble_matrix(values: list[float], dim: int, fmt: str) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=np.int64)
    it = iter(values)
    if fmt == "FULL_MATRIX":
        m = np.array(values, dtype=np.int64).reshape(dim, dim)
        if not np.array_equal(m, m.T):
            raise TsplibParseError("FULL_MATRIX is not symmetric")
        if np.diag(m).any():
            raise TsplibParseError("FULL_MATRIX has a nonzero diagonal")
    elif fmt == "UPPER_ROW":
        for i in range(dim):
            for j in range(i + 1, dim):
                m[i, j] = m[j, i] = int(next(it))
    elif fmt == "LOWER_DIAG_ROW":
        for i in range(dim):
            for j in range(i + 1):
                v = int(next(it))
                m[i, j] = m[j, i] = v
        if np.diag(m).any():
            raise TsplibParseError("LOWER_DIAG_ROW has a nonzero diagonal")
    m.flags.writeable = False
    return m


def _data_root():
    return resources.files("dynants").joinpath("data")


def _load_registry() -> dict[str, int]:
    table: dict[str, int] = {}
    text = _data_root().joinpath("optima.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, value = line.split()
        table[name.lower()] = int(value)
    return table


_REGISTRY: dict[str, int] | None = None


def known_optimum(name: str) -> int | None:
    """Registry lookup of the published optimal tour length, if known."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _load_registry()
    return _REGISTRY.get(name.lower())


def bundled_instances() -> list[str]:
    """Names of the .tsp files shipped with the package."""
    return sorted(p.name[:-4] for p in _data_root().iterdir()
                  if p.name.endswith(".tsp"))


def load_instance(path_or_name: str | Path) -> Instance:
    """Load an instance from a filesystem path or a bundled instance name.

    A bare name ("bays29", with or without the .tsp suffix) falls back to the
    data files shipped with the package when no such file exists on disk.
    """
    p = Path(path_or_name)
    if p.exists():
        return parse_instance(p.read_text())
    stem = p.name[:-4] if p.name.endswith(".tsp") else p.name
    candidate = _data_root().joinpath(f"{stem.lower()}.tsp")
    if candidate.is_file():
        return parse_instance(candidate.read_text())
    raise FileNotFoundError(
        f"no such instance file {path_or_name!r}; bundled instances: "
        f"{', '.join(bundled_instances())}")
