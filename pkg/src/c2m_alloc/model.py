"""Domain types, JSON instance format, validation and the synthetic instance generator.

An :class:`Instance` describes one planning round of the platform: ``I``
products ordered by customers and ``N`` manufacturers that may produce them.
Matrices are indexed ``[product, manufacturer]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

import numpy as np

MAX_MANUFACTURERS = 16

MATRIX_FIELDS = ("manufacturing_cost", "production_capacity")
VECTOR_FIELDS = ("ask_price", "shortage_cost", "order_quantity", "order_delivery_time")
# canonical key order of the JSON format
JSON_FIELDS = (
    "product_count",
    "manufacturer_count",
    "ask_price",
    "shortage_cost",
    "order_quantity",
    "order_delivery_time",
    "manufacturing_cost",
    "production_capacity",
)


class InstanceFormatError(ValueError):
    """Raised when an instance document cannot be parsed.

    ``location`` is a field path (``"manufacturing_cost[2]"``) or a byte
    offset for JSON syntax errors.
    """

    def __init__(self, message: str, location: str | int | None = None):
        self.location = location
        if isinstance(location, int):
            message = f"byte offset {location}: {message}"
        elif location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ConfigurationError(ValueError):
    """Invalid :class:`GeneratorConfig`."""


def _frozen(values: Any) -> np.ndarray:
    arr = np.array(values)
    if arr.dtype.kind in "iub":
        arr = arr.astype(np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """Products, manufacturers and every cost/capacity parameter.

    Arrays are stored read-only.  Construction performs no validation so that
    malformed data can still be inspected with :func:`validate_instance`.
    """

    product_count: int
    manufacturer_count: int
    manufacturing_cost: np.ndarray
    production_capacity: np.ndarray
    shortage_cost: np.ndarray
    ask_price: np.ndarray
    order_quantity: np.ndarray
    order_delivery_time: np.ndarray

    def __post_init__(self):
        for name in MATRIX_FIELDS + VECTOR_FIELDS:
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if (self.product_count, self.manufacturer_count) != (
            other.product_count,
            other.manufacturer_count,
        ):
            return False
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in MATRIX_FIELDS + VECTOR_FIELDS
        )

    __hash__ = None

    @property
    def capacity(self) -> np.ndarray:
        """Units each manufacturer can deliver before the due date, ``PC * OT``."""
        return self.production_capacity * self.order_delivery_time[:, None]

    @property
    def margin(self) -> np.ndarray:
        """Unit margin ``SP_i - MC_in`` of every product/manufacturer pairing."""
        return self.ask_price[:, None] - self.manufacturing_cost

    @property
    def full_mask(self) -> int:
        return (1 << self.manufacturer_count) - 1

    def with_scaled_orders(self, factor: float) -> "Instance":
        """Copy with every order quantity multiplied by ``factor``.

        Scaled quantities are rounded half up to stay integral.
        """
        oq = np.floor(self.order_quantity * float(factor) + 0.5).astype(np.int64)
        return Instance(
            product_count=self.product_count,
            manufacturer_count=self.manufacturer_count,
            manufacturing_cost=self.manufacturing_cost,
            production_capacity=self.production_capacity,
            shortage_cost=self.shortage_cost,
            ask_price=self.ask_price,
            order_quantity=oq,
            order_delivery_time=self.order_delivery_time,
        )

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "product_count": int(self.product_count),
            "manufacturer_count": int(self.manufacturer_count),
        }
        for name in JSON_FIELDS[2:]:
            out[name] = getattr(self, name).tolist()
        return out


@dataclass(frozen=True, order=True)
class Coalition:
    """A subset of manufacturers stored as a bitmask (bit ``n`` = manufacturer ``n``)."""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("coalition mask must be nonnegative")

    def __index__(self) -> int:
        return self.mask

    def __iter__(self) -> Iterator[int]:
        return iter(members(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, n: int) -> bool:
        return bool(self.mask >> n & 1)

    @classmethod
    def of(cls, manufacturers: Iterable[int]) -> "Coalition":
        mask = 0
        for n in manufacturers:
            mask |= 1 << n
        return cls(mask)

    @classmethod
    def grand(cls, manufacturer_count: int) -> "Coalition":
        return cls((1 << manufacturer_count) - 1)


def members(mask: int) -> list[int]:
    """Manufacturer indices contained in ``mask``, ascending."""
    out = []
    n = 0
    while mask:
        if mask & 1:
            out.append(n)
        mask >>= 1
        n += 1
    return out


# --------------------------------------------------------------------------- #
# validation
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


def validate_instance(inst: Instance) -> list[Violation]:
    """Return every invariant violation of ``inst``; an empty list means valid."""
    out: list[Violation] = []
    I, N = inst.product_count, inst.manufacturer_count
    for name, value in (("product_count", I), ("manufacturer_count", N)):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
            out.append(Violation(name, "must be a positive integer"))
    if out:
        return out
    if N > MAX_MANUFACTURERS:
        out.append(Violation("manufacturer_count", f"at most {MAX_MANUFACTURERS} manufacturers supported"))

    shapes = {name: (I, N) for name in MATRIX_FIELDS}
    shapes.update({name: (I,) for name in VECTOR_FIELDS})
    for name, shape in shapes.items():
        arr = getattr(inst, name)
        if arr.shape != shape:
            out.append(Violation(name, f"expected shape {shape}, got {arr.shape}"))
            continue
        if arr.dtype.kind not in "iu":
            if arr.dtype.kind == "f" and not np.all(np.isfinite(arr)):
                out.append(Violation(name, "values must be finite"))
            else:
                out.append(Violation(name, "values must be integers"))
            continue
        lower = 1 if name == "order_delivery_time" else 0
        bad = np.argwhere(arr < lower)
        if bad.size:
            idx = ",".join(str(int(k)) for k in bad[0])
            out.append(Violation(f"{name}[{idx}]", f"must be >= {lower}, got {int(arr[tuple(bad[0])])}"))
    return out


# --------------------------------------------------------------------------- #
# JSON format
# --------------------------------------------------------------------------- #


def _check_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"expected an integer, got {value!r}", path)
    return value


def _vector(doc: Mapping, name: str, length: int) -> list[int]:
    value = doc[name]
    if not isinstance(value, list):
        raise InstanceFormatError("expected an array", name)
    if len(value) != length:
        raise InstanceFormatError(f"expected {length} entries, got {len(value)}", name)
    return [_check_int(v, f"{name}[{k}]") for k, v in enumerate(value)]


def _matrix(doc: Mapping, name: str, rows: int, cols: int) -> list[list[int]]:
    value = doc[name]
    if not isinstance(value, list):
        raise InstanceFormatError("expected an array of rows", name)
    if len(value) != rows:
        raise InstanceFormatError(f"expected {rows} rows, got {len(value)}", name)
    out = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InstanceFormatError(f"expected a row of {cols} entries, got {got}", f"{name}[{r}]")
        out.append([_check_int(v, f"{name}[{r}][{c}]") for c, v in enumerate(row)])
    return out


def instance_from_dict(doc: Mapping) -> Instance:
    if not isinstance(doc, Mapping):
        raise InstanceFormatError("top-level value must be an object")
    for name in JSON_FIELDS:
        if name not in doc:
            raise InstanceFormatError("missing field", name)
    I = _check_int(doc["product_count"], "product_count")
    N = _check_int(doc["manufacturer_count"], "manufacturer_count")
    if I < 1 or N < 1:
        raise InstanceFormatError("dimensions must be positive", "product_count" if I < 1 else "manufacturer_count")
    return Instance(
        product_count=I,
        manufacturer_count=N,
        manufacturing_cost=_matrix(doc, "manufacturing_cost", I, N),
        production_capacity=_matrix(doc, "production_capacity", I, N),
        shortage_cost=_vector(doc, "shortage_cost", I),
        ask_price=_vector(doc, "ask_price", I),
        order_quantity=_vector(doc, "order_quantity", I),
        order_delivery_time=_vector(doc, "order_delivery_time", I),
    )


def read_instance(data: bytes | str) -> Instance:
    """Parse the JSON instance format.

    Raises :class:`InstanceFormatError` for syntax errors (with byte offset),
    missing fields and dimension mismatches (with field path).
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceFormatError("input is not valid UTF-8", exc.start) from exc
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise InstanceFormatError(f"JSON syntax error: {exc.msg}", offset) from exc
    return instance_from_dict(doc)


def write_instance(inst: Instance) -> bytes:
    """Serialize to canonical JSON: fixed key order, one matrix row per line."""
    doc = inst.to_dict()
    lines = ["{"]
    for k, name in enumerate(JSON_FIELDS):
        value = doc[name]
        if name in MATRIX_FIELDS:
            rows = ",\n    ".join(json.dumps(row) for row in value)
            text = f"[\n    {rows}\n  ]"
        else:
            text = json.dumps(value)
        sep = "," if k < len(JSON_FIELDS) - 1 else ""
        lines.append(f'  "{name}": {text}{sep}')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --------------------------------------------------------------------------- #
# generator
# --------------------------------------------------------------------------- #

DEFAULT_RANGES: dict[str, tuple[int, int]] = {
    "manufacturing_cost": (1, 50),
    "ask_price": (20, 80),
    "shortage_cost": (1, 20),
    "production_capacity": (0, 40),
    "order_quantity": (50, 2000),
    "order_delivery_time": (1, 10),
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Seed, shape and inclusive integer draw ranges for :func:`generate_instance`."""

    seed: int
    product_count: int
    manufacturer_count: int
    ranges: Mapping[str, tuple[int, int]] = field(default_factory=lambda: dict(DEFAULT_RANGES))

    def validate(self) -> None:
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.product_count < 1 or self.manufacturer_count < 1:
            raise ConfigurationError("product_count and manufacturer_count must be positive")
        if self.manufacturer_count > MAX_MANUFACTURERS:
            raise ConfigurationError(f"manufacturer_count must be <= {MAX_MANUFACTURERS}")
        unknown = set(self.ranges) - set(DEFAULT_RANGES)
        if unknown:
            raise ConfigurationError(f"unknown range keys: {sorted(unknown)}")
        for name in DEFAULT_RANGES:
            lo, hi = self.range(name)
            if lo > hi:
                raise ConfigurationError(f"empty range for {name}: [{lo}, {hi}]")
            floor = 1 if name == "order_delivery_time" else 0
            if lo < floor:
                raise ConfigurationError(f"{name} range must start at >= {floor}")

    def range(self, name: str) -> tuple[int, int]:
        lo, hi = self.ranges.get(name, DEFAULT_RANGES[name])
        return int(lo), int(hi)


def generate_instance(cfg: GeneratorConfig) -> Instance:
    """Draw every parameter uniformly from the configured integer ranges.

    The output is a pure function of ``cfg``.
    """
    cfg.validate()
    rng = np.random.default_rng(int(cfg.seed))
    I, N = cfg.product_count, cfg.manufacturer_count

    def draw(name, size):
        lo, hi = cfg.range(name)
        return rng.integers(lo, hi, size=size, endpoint=True, dtype=np.int64)

    # draw order is part of the determinism contract
    ask_price = draw("ask_price", I)
    shortage_cost = draw("shortage_cost", I)
    order_quantity = draw("order_quantity", I)
    order_delivery_time = draw("order_delivery_time", I)
    manufacturing_cost = draw("manufacturing_cost", (I, N))
    production_capacity = draw("production_capacity", (I, N))
    return Instance(
        product_count=I,
        manufacturer_count=N,
        manufacturing_cost=manufacturing_cost,
        production_capacity=production_capacity,
        shortage_cost=shortage_cost,
        ask_price=ask_price,
        order_quantity=order_quantity,
        order_delivery_time=order_delivery_time,
    )
