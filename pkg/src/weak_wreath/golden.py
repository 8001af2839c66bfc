"""
The golden table of observable-algebra dimensions.

Entries map "<bialgebra>:<convention>:n=<n>" to a dimension. The packaged
table ships with the library; a different file can be named in the
configuration. Entries are only ever written by regenerate(), which uses
the independent oracle route rather than the main construction.
"""

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

import yaml

from weak_wreath.exactlinalg import RATIONAL, Field
from weak_wreath.exceptions import ParseError
from weak_wreath.spinchain import SpinChainSpec, oracle_dimension
from weak_wreath.weakbialgebra import builtin_bialgebra

logger = logging.getLogger(__name__)

PACKAGED_TABLE = "golden.yaml"


@dataclass
class GoldenTable:
    """
    Golden dimensions keyed by bialgebra, convention and n.

    Attributes:
        path: File the table was read from; None for the packaged table
        entries: key -> dimension
    """

    path: Optional[str] = None
    entries: Dict[str, int] = field(default_factory=dict)

    @staticmethod
    def key(bialgebra: str, convention: str, n: int) -> str:
        return f"{bialgebra}:{convention}:n={n}"

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> "GoldenTable":
        """
        Read a table from a file, or the packaged table when path is None.

        A path that does not exist yet gives an empty table, so that
        regeneration can create it.

        Raises:
            ParseError: If the file is not a mapping of keys to integers
        """
        if path is None:
            source = f"weak_wreath/data/{PACKAGED_TABLE}"
            text = (
                resources.files("weak_wreath")
                .joinpath("data", PACKAGED_TABLE)
                .read_text(encoding="utf-8")
            )
        else:
            source = str(path)
            if not Path(path).exists():
                logger.info(f"Golden table {source} does not exist yet")
                return cls(path=source)
            text = Path(path).read_text(encoding="utf-8")

        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ParseError(source, f"invalid YAML: {e}")
        if not isinstance(data, dict):
            raise ParseError(source, "golden table must be a mapping")
        entries: Dict[str, int] = {}
        items = sorted(data.items(), key=lambda kv: str(kv[0]))
        for n, (key, value) in enumerate(items):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParseError(
                    source, f"dimension for '{key}' must be an integer", n
                )
            entries[str(key)] = value
        return cls(path=None if path is None else source, entries=entries)

    def lookup(self, bialgebra: str, convention: str, n: int) -> Optional[int]:
        return self.entries.get(self.key(bialgebra, convention, n))

    def set(self, bialgebra: str, convention: str, n: int, dimension: int) -> None:
        self.entries[self.key(bialgebra, convention, n)] = dimension

    def save(self, path: Optional[Union[str, Path]] = None) -> Path:
        """
        Write the table with sorted keys.

        Raises:
            ValueError: If neither path nor self.path names a file
        """
        target = path if path is not None else self.path
        if target is None:
            raise ValueError("No file to save the golden table to")
        out = Path(target)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            yaml.safe_dump(dict(sorted(self.entries.items())), f, sort_keys=True)
        logger.info(f"Wrote {len(self.entries)} golden entries to {out}")
        return out

    def regenerate(
        self,
        names: Iterable[str],
        ns: Iterable[int],
        convention: str = "H-even",
        field: Field = RATIONAL,
    ) -> Dict[str, int]:
        """
        Recompute entries with the oracle and store them.

        Returns:
            The recomputed entries
        """
        fresh: Dict[str, int] = {}
        orders = list(ns)
        for name in names:
            h = builtin_bialgebra(name, field)
            for n in orders:
                dimension = oracle_dimension(SpinChainSpec(h, n, convention))
                key = self.key(name.lower(), convention, n)
                previous = self.entries.get(key)
                if previous is not None and previous != dimension:
                    logger.warning(
                        f"Golden entry {key} changes from {previous} to {dimension}",
                        extra={"dimension": dimension},
                    )
                self.entries[key] = dimension
                fresh[key] = dimension
        return fresh
