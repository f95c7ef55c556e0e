from importlib import resources

import numpy as np
import pytest

from attrimine.embeddings import EmbeddingStore
from attrimine.factors import Factor, factor_embedding, load_catalog, load_default_catalog


def store_from(mapping, dim):
    return EmbeddingStore(dim=dim, vectors={k: np.asarray(v, float) for k, v in mapping.items()},
                          stopwords=frozenset({"of", "the"}))


class TestLoadCatalog:
    def test_default_catalog_has_twenty_categories(self):
        catalog = load_default_catalog()
        assert len(catalog.categories) == 20
        assert len(catalog.factors) >= 40

    def test_partition_invariant(self):
        catalog = load_default_catalog()
        seen = {}
        for category in catalog.categories.values():
            for fid in category.member_factor_ids:
                assert fid not in seen, f"{fid} in two categories"
                seen[fid] = category.id
        assert set(seen) == set(catalog.factors)
        for fid, factor in catalog.factors.items():
            assert seen[fid] == factor.category

    def test_covers_annotation_schema(self):
        # every category used by the bundled label file exists in the catalog
        catalog = load_default_catalog()
        labels = resources.files("attrimine.data").joinpath("mini/labels.tsv").read_text(encoding="utf-8")
        used = {
            line.split("\t")[2].strip()
            for line in labels.splitlines()
            if line.strip() and not line.startswith("#")
        } - {"NONE"}
        assert used <= set(catalog.categories)

    def test_single_token_phrase(self):
        catalog = load_default_catalog()
        factor = catalog.factors["overpopulation"]
        assert factor.phrase == ("overpopulation",)
        assert factor.category == "overpopulation"

    def test_factor_in_two_categories_rejected(self, tmp_path):
        path = tmp_path / "catalog.tsv"
        path.write_text(
            "CATEGORY\ta\tA\nCATEGORY\tb\tB\n"
            "FACTOR\tx\tsome phrase\ta\nFACTOR\tx\tsome phrase\tb\n",
            encoding="utf-8",
        )
        with pytest.raises(ValueError, match="'x' assigned to multiple"):
            load_catalog(path)

    def test_unknown_category_rejected(self, tmp_path):
        path = tmp_path / "catalog.tsv"
        path.write_text("CATEGORY\ta\tA\nFACTOR\tx\tphrase\tnope\n", encoding="utf-8")
        with pytest.raises(ValueError, match="unknown category"):
            load_catalog(path)


class TestFactorEmbedding:
    def test_single_token_identity(self):
        store = store_from({"deforestation": [1.0, 2.0]}, 2)
        factor = Factor(id="deforestation", phrase=("deforestation",), category="deforestation")
        assert np.allclose(factor_embedding(factor, store), [1.0, 2.0])

    def test_mean_of_two(self):
        store = store_from({"climate": [1.0, 0.0], "change": [0.0, 1.0]}, 2)
        factor = Factor(id="climate_change", phrase=("climate", "change"), category="climate_change")
        assert np.allclose(factor_embedding(factor, store), [0.5, 0.5])

    def test_oov_token_skipped(self):
        store = store_from({"climate": [1.0, 0.0]}, 2)
        factor = Factor(id="climate_change", phrase=("climate", "change"), category="climate_change")
        assert np.allclose(factor_embedding(factor, store), [1.0, 0.0])

    def test_stopwords_kept_in_phrase(self):
        # "of" is a stopword yet still contributes to the phrase mean
        store = store_from({"lack": [1.0, 0.0], "of": [0.0, 1.0], "funding": [1.0, 0.0]}, 2)
        factor = Factor(id="lack_of_funding", phrase=("lack", "of", "funding"), category="government_inaction")
        assert np.allclose(factor_embedding(factor, store), [2 / 3, 1 / 3])

    def test_all_oov_errors(self):
        store = store_from({"water": [1.0, 0.0]}, 2)
        factor = Factor(id="mystery", phrase=("zz", "qq"), category="pollution")
        with pytest.raises(ValueError, match="mystery"):
            factor_embedding(factor, store)

    def test_permutation_invariant_and_dim(self):
        store = store_from({"a": [1.0, 2.0], "b": [3.0, -1.0], "c": [0.5, 0.5]}, 2)
        forward = factor_embedding(Factor("f", ("a", "b", "c"), "x"), store)
        backward = factor_embedding(Factor("f", ("c", "b", "a"), "x"), store)
        assert np.allclose(forward, backward)
        assert forward.shape == (store.dim,)
