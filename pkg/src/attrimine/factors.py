"""The attribution-factor catalog: factor phrases grouped into broad categories."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import tokenize
from .embeddings import EmbeddingStore


@dataclass(frozen=True)
class Factor:
    id: str
    phrase: tuple[str, ...]
    category: str


@dataclass(frozen=True)
class BroadCategory:
    id: str
    display_name: str
    member_factor_ids: frozenset[str]


@dataclass(frozen=True)
class FactorCatalog:
    categories: dict[str, BroadCategory]
    factors: dict[str, Factor]

    def category_of(self, factor_id: str) -> str:
        return self.factors[factor_id].category

    @property
    def factor_ids(self) -> list[str]:
        return sorted(self.factors)

    @property
    def category_ids(self) -> list[str]:
        return sorted(self.categories)


def _parse_catalog(lines: list[str], source: str) -> FactorCatalog:
    categories: dict[str, tuple[str, list[str]]] = {}
    factors: dict[str, Factor] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        kind = fields[0]
        if kind == "CATEGORY":
            if len(fields) != 3:
                raise ValueError(f"{source} line {lineno}: CATEGORY rows need id and display_name")
            cid, display = fields[1].strip(), fields[2].strip()
            if cid in categories:
                raise ValueError(f"{source} line {lineno}: duplicate category {cid!r}")
            categories[cid] = (display, [])
        elif kind == "FACTOR":
            if len(fields) != 4:
                raise ValueError(f"{source} line {lineno}: FACTOR rows need id, phrase, category_id")
            fid, phrase_text, cid = fields[1].strip(), fields[2].strip(), fields[3].strip()
            if fid in factors:
                raise ValueError(f"factor {fid!r} assigned to multiple categories")
            if cid not in categories:
                raise ValueError(f"factor {fid!r} assigned to unknown category {cid!r}")
            phrase = tuple(tokenize(phrase_text))
            if not phrase:
                raise ValueError(f"factor {fid!r} has an empty phrase")
            factors[fid] = Factor(id=fid, phrase=phrase, category=cid)
            categories[cid][1].append(fid)
        else:
            raise ValueError(f"{source} line {lineno}: unknown row kind {kind!r}")
    return FactorCatalog(
        categories={
            cid: BroadCategory(id=cid, display_name=display, member_factor_ids=frozenset(members))
            for cid, (display, members) in categories.items()
        },
        factors=factors,
    )


def load_catalog(path: str | Path) -> FactorCatalog:
    """Load a tab-separated catalog file.

    Rows are ``CATEGORY<TAB>id<TAB>display_name`` or
    ``FACTOR<TAB>id<TAB>phrase<TAB>category_id``; categories must be
    declared before their members, and every factor belongs to exactly
    one category.
    """
    path = Path(path)
    return _parse_catalog(path.read_text(encoding="utf-8").splitlines(), str(path))


def load_default_catalog() -> FactorCatalog:
    """The bundled water-crisis catalog: 20 broad categories of factors."""
    text = resources.files("attrimine.data").joinpath("catalog.tsv").read_text(encoding="utf-8")
    return _parse_catalog(text.splitlines(), "catalog.tsv")


def factor_embedding(factor: Factor, store: EmbeddingStore) -> np.ndarray:
    """Unweighted mean of the in-vocabulary phrase token vectors.

    Stopwords inside factor phrases are kept ("lack of funding" needs its
    "of"); only out-of-vocabulary tokens are skipped.
    """
    rows = [store.vectors[t] for t in factor.phrase if t in store]
    if not rows:
        raise ValueError(f"factor {factor.id!r}: every phrase token is out of vocabulary")
    return np.mean(rows, axis=0)
