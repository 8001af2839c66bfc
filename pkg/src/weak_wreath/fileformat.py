"""
Readers for the YAML input files.

Three kinds of document are understood:

- algebra-like files (.alg) holding sparse structure constants
- linear-map files (.map) holding a sparse matrix between tensor shapes
- object manifests tying .alg and .map files into an object, or naming a
  spin chain

Every structural problem is reported as a ParseError carrying the file
path and, where it applies, the offending entry number.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from weak_wreath.exactlinalg import RATIONAL, Field, Matrix, ScalarLike
from weak_wreath.exceptions import ParseError, ShapeMismatch
from weak_wreath.finvect import (
    Algebra,
    Coalgebra,
    Demimonad,
    LinMap,
    Space,
    algebra_from_constants,
    coalgebra_from_constants,
)
from weak_wreath.spinchain import CONVENTIONS, SpinChainSpec
from weak_wreath.wdln import WdlNObject, make_object
from weak_wreath.weakbialgebra import BUILTIN_NAMES, WeakBialgebra, builtin_bialgebra

logger = logging.getLogger(__name__)

KINDS = ("algebra", "coalgebra", "demimonad", "weak-bialgebra")

Constants3 = Dict[Tuple[int, int, int], ScalarLike]
Constants1 = Dict[int, ScalarLike]


@dataclass
class AlgebraFile:
    """
    Parsed contents of an .alg file.

    Attributes:
        path: Source file
        dim: Dimension of the carrier
        field: Scalar field
        kind: Declared kind, if any
        shape: Tensor shape of the carrier, if given
        mul: (i, j, k) -> c meaning e_i e_j contains c e_k
        unit: k -> c
        comul: (i, j, k) -> c meaning Delta(e_i) contains c e_j (x) e_k
        counit: i -> c
        name: Label used in reports
    """

    path: str
    dim: int
    field: Field = RATIONAL
    kind: Optional[str] = None
    shape: Optional[Tuple[int, ...]] = None
    mul: Optional[Constants3] = None
    unit: Optional[Constants1] = None
    comul: Optional[Constants3] = None
    counit: Optional[Constants1] = None
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or Path(self.path).stem

    def _require(self, *keys: str) -> None:
        missing = [key for key in keys if getattr(self, key) is None]
        if missing:
            raise ParseError(
                self.path, f"missing required key(s): {', '.join(missing)}"
            )

    def to_algebra(self) -> Algebra:
        """The algebra (mul, unit)."""
        self._require("mul", "unit")
        assert self.mul is not None and self.unit is not None
        return algebra_from_constants(
            self.dim, self.mul, self.unit, self.field, name=self.label, shape=self.shape
        )

    def to_demimonad(self) -> Demimonad:
        """The same constants read as a demimonad."""
        alg = self.to_algebra()
        return Demimonad(space=alg.space, mul=alg.mul, unit=alg.unit, name=alg.name)

    def to_coalgebra(self) -> Coalgebra:
        """The coalgebra (comul, counit)."""
        self._require("comul", "counit")
        assert self.comul is not None and self.counit is not None
        return coalgebra_from_constants(
            self.dim,
            self.comul,
            self.counit,
            self.field,
            name=self.label,
            shape=self.shape,
        )

    def to_weak_bialgebra(self) -> WeakBialgebra:
        """All four structure maps."""
        self._require("mul", "unit", "comul", "counit")
        alg = self.to_algebra()
        coalg = self.to_coalgebra()
        return WeakBialgebra(
            space=alg.space,
            mul=alg.mul,
            unit=alg.unit,
            comul=coalg.comul,
            counit=coalg.counit,
            name=self.label,
        )


@dataclass
class Manifest:
    """
    A parsed object manifest: either an object or a spin chain.

    Attributes:
        path: Source file
        obj: The object, for monads/laws manifests
        chain: The chain, for spinchain manifests
        sources: Files the object was read from
    """

    path: str
    obj: Optional[WdlNObject] = None
    chain: Optional[SpinChainSpec] = None
    sources: List[str] = field(default_factory=list)


def _read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    with open(file_path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ParseError(str(path), f"invalid YAML: {e}")
    if not isinstance(data, dict):
        raise ParseError(str(path), "document must be a mapping")
    return data


def _field(path: str, data: Dict[str, Any], override: Optional[Field]) -> Field:
    if override is not None:
        return override
    try:
        return Field.parse(str(data.get("field", "rational")))
    except ValueError as e:
        raise ParseError(path, str(e))


def _int(path: str, value: Any, what: str, entry: Optional[int] = None) -> int:
    # bool is an int subclass; YAML "yes" must not count as 1
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(path, f"{what} must be an integer, got {value!r}", entry)
    return value


def _scalar(path: str, value: Any, entry: int) -> ScalarLike:
    """Integers or "a/b" strings; floats are rejected as inexact."""
    if isinstance(value, bool):
        raise ParseError(path, f"invalid value {value!r}", entry)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(path, f"invalid value {value!r}", entry)
    raise ParseError(path, f"value {value!r} is not an integer or 'a/b' string", entry)


def _shape(path: str, value: Any, what: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ParseError(path, f"{what} must be a non-empty list of dimensions")
    dims = tuple(_int(path, d, what) for d in value)
    if any(d < 1 for d in dims):
        raise ParseError(path, f"{what} dimensions must be positive")
    return dims


def _entries(
    path: str, data: Dict[str, Any], key: str, bounds: Tuple[int, ...]
) -> Optional[Dict[Tuple[int, ...], ScalarLike]]:
    """
    Parse a list of [index..., value] rows.

    Args:
        bounds: Exclusive upper bound of each index position

    Returns:
        Index tuple -> value, or None if the key is absent
    """
    if key not in data:
        return None
    rows = data[key]
    if rows is None:
        rows = []
    if not isinstance(rows, list):
        raise ParseError(path, f"'{key}' must be a list")
    width = len(bounds) + 1
    parsed: Dict[Tuple[int, ...], ScalarLike] = {}
    for n, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise ParseError(path, f"'{key}' rows must have {width} items", n)
        indices = tuple(_int(path, v, f"'{key}' index", n) for v in row[:-1])
        for index, bound in zip(indices, bounds):
            if not (0 <= index < bound):
                raise ParseError(
                    path, f"'{key}' index {index} outside [0, {bound})", n
                )
        if indices in parsed:
            raise ParseError(path, f"'{key}' repeats the index {list(indices)}", n)
        parsed[indices] = _scalar(path, row[-1], n)
    return parsed


def load_algebra_file(
    path: Union[str, Path], field: Optional[Field] = None
) -> AlgebraFile:
    """
    Parse an .alg file.

    Args:
        path: File to read
        field: Overrides the file's own field when given

    Raises:
        FileNotFoundError: If the file does not exist
        ParseError: If the document is malformed
    """
    source = str(path)
    data = _read_yaml(path)
    if "dim" not in data:
        raise ParseError(source, "missing required key: dim")
    dim = _int(source, data["dim"], "dim")
    if dim < 1:
        raise ParseError(source, "dim must be positive")

    kind = data.get("kind")
    if kind is not None and kind not in KINDS:
        raise ParseError(
            source, f"invalid kind '{kind}'. Valid options: {', '.join(KINDS)}"
        )

    shape = None
    if data.get("shape") is not None:
        shape = _shape(source, data["shape"], "shape")
        product = 1
        for d in shape:
            product *= d
        if product != dim:
            raise ParseError(source, f"shape {list(shape)} does not multiply to {dim}")

    mul = _entries(source, data, "mul", (dim, dim, dim))
    unit = _entries(source, data, "unit", (dim,))
    comul = _entries(source, data, "comul", (dim, dim, dim))
    counit = _entries(source, data, "counit", (dim,))

    parsed = AlgebraFile(
        path=source,
        dim=dim,
        field=_field(source, data, field),
        kind=kind,
        shape=shape,
        mul={(i, j, k): v for (i, j, k), v in mul.items()} if mul is not None else None,
        unit={k: v for (k,), v in unit.items()} if unit is not None else None,
        comul=(
            {(i, j, k): v for (i, j, k), v in comul.items()}
            if comul is not None
            else None
        ),
        counit={i: v for (i,), v in counit.items()} if counit is not None else None,
        name=str(data.get("name", "")),
    )
    logger.debug(f"Parsed {source}: dim {dim}", extra={"dimension": dim})
    return parsed


def load_map_file(path: Union[str, Path], field: Optional[Field] = None) -> LinMap:
    """
    Parse a .map file into a linear map.

    Raises:
        FileNotFoundError: If the file does not exist
        ParseError: If the document is malformed
    """
    source = str(path)
    data = _read_yaml(path)
    for key in ("domain", "codomain"):
        if key not in data:
            raise ParseError(source, f"missing required key: {key}")
    domain = Space(_shape(source, data["domain"], "domain"))
    codomain = Space(_shape(source, data["codomain"], "codomain"))
    entries = _entries(source, data, "entries", (codomain.dim, domain.dim)) or {}
    matrix = Matrix.from_entries(
        [(row, col, v) for (row, col), v in entries.items()],
        (codomain.dim, domain.dim),
        _field(source, data, field),
    )
    return LinMap(domain, codomain, matrix)


def _resolve(base: Path, value: Any, source: str, what: str) -> Path:
    if not isinstance(value, str):
        raise ParseError(source, f"{what} must be a path string")
    candidate = Path(value)
    return candidate if candidate.is_absolute() else base / candidate


def _load_bialgebra(
    base: Path, value: Any, source: str, field: Field
) -> WeakBialgebra:
    if isinstance(value, str) and value.lower() in BUILTIN_NAMES:
        return builtin_bialgebra(value, field)
    path = _resolve(base, value, source, "bialgebra")
    return load_algebra_file(path, field).to_weak_bialgebra()


def load_manifest(path: Union[str, Path], field: Optional[Field] = None) -> Manifest:
    """
    Parse an object manifest.

    The monads/laws form lists .alg files and, per pair, a .map file or
    the word "flip". Pairs not listed use the normalized symmetry. The
    spinchain form names a builtin bialgebra or an .alg file.

    Raises:
        FileNotFoundError: If a referenced file does not exist
        ParseError: If a document is malformed
        ShapeMismatch: If a law does not fit its pair of monads
    """
    source = str(path)
    base = Path(path).parent
    data = _read_yaml(path)
    target_field = _field(source, data, field)

    if "spinchain" in data:
        chain = data["spinchain"]
        if not isinstance(chain, dict):
            raise ParseError(source, "'spinchain' must be a mapping")
        if "bialgebra" not in chain or "n" not in chain:
            raise ParseError(source, "'spinchain' needs 'bialgebra' and 'n'")
        convention = chain.get("convention", "H-even")
        if convention not in CONVENTIONS:
            raise ParseError(
                source,
                f"invalid convention '{convention}'. "
                f"Valid options: {', '.join(CONVENTIONS)}",
            )
        n = _int(source, chain["n"], "n")
        if n < 0:
            raise ParseError(source, "n must be non-negative")
        h = _load_bialgebra(base, chain["bialgebra"], source, target_field)
        return Manifest(path=source, chain=SpinChainSpec(h, n, convention))

    if "monads" not in data:
        raise ParseError(source, "manifest needs 'monads' or 'spinchain'")
    entries = data["monads"]
    if not isinstance(entries, list) or not entries:
        raise ParseError(source, "'monads' must be a non-empty list")
    sources = []
    monads: List[Demimonad] = []
    for n, entry in enumerate(entries):
        monad_path = _resolve(base, entry, source, f"monad {n}")
        sources.append(str(monad_path))
        monads.append(load_algebra_file(monad_path, target_field).to_demimonad())

    laws: Dict[Tuple[int, int], LinMap] = {}
    seen = set()
    raw_laws = data.get("laws") or []
    if not isinstance(raw_laws, list):
        raise ParseError(source, "'laws' must be a list")
    for n, item in enumerate(raw_laws):
        if not isinstance(item, dict) or not {"i", "j", "map"} <= set(item):
            raise ParseError(source, "law entries need 'i', 'j' and 'map'", n)
        i = _int(source, item["i"], "i", n)
        j = _int(source, item["j"], "j", n)
        if not (0 <= i < j < len(monads)):
            raise ParseError(
                source, f"law pair ({i}, {j}) outside 0..{len(monads) - 1}", n
            )
        if (i, j) in seen:
            raise ParseError(source, f"law pair ({i}, {j}) given twice", n)
        seen.add((i, j))
        if item["map"] == "flip":
            continue
        map_path = _resolve(base, item["map"], source, "map")
        sources.append(str(map_path))
        law = load_map_file(map_path, target_field)
        si, sj = monads[i].space, monads[j].space
        if (law.domain.dim, law.codomain.dim) != (sj.dim * si.dim, si.dim * sj.dim):
            raise ShapeMismatch(
                f"Law ({i}, {j}) in {map_path} must map {sj.tensor(si)} -> "
                f"{si.tensor(sj)}"
            )
        laws[(i, j)] = law.relabel(sj.tensor(si), si.tensor(sj))

    name = str(data.get("name", Path(source).stem))
    obj = make_object(monads, laws, name=name)
    return Manifest(path=source, obj=obj, sources=sources)
