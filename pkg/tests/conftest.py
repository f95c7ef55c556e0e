import json
from importlib import resources
from pathlib import Path

import pytest

DATA = resources.files("attrimine.data")

MINI_TRAINING = {
    "learning_rate": 0.1,
    "batch_size": 16,
    "n_epochs": 20,
    "pos_weight": 6.0,
    "dropout_rate": 0.05,
}

MINI_LDA = {
    "n_topics": 5,
    "alpha": 0.5,
    "beta": 0.01,
    "n_iterations": 200,
    "burn_in": 50,
    "min_count": 2,
}


@pytest.fixture
def mini_config_factory(tmp_path):
    """Build a run-config JSON pointing at the bundled mini corpus."""

    def build(out_name="out", seed=7, **overrides) -> Path:
        config = {
            "seed": seed,
            "paths": {
                "corpus_dump": str(DATA.joinpath("mini/comments.jsonl")),
                "vectors": str(DATA.joinpath("mini/vectors.txt")),
                "stopwords": str(DATA.joinpath("stopwords.txt")),
                "labels": str(DATA.joinpath("mini/labels.tsv")),
                "out_dir": str(tmp_path / out_name),
            },
            "pruning": {"percentile": 0.2, "threshold": 0.7},
            "lda": dict(MINI_LDA),
            "training": dict(MINI_TRAINING),
            "evaluation": {"ks": [1, 3]},
        }
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(config.get(key), dict):
                config[key].update(value)
            else:
                config[key] = value
        path = tmp_path / f"config_{out_name}.json"
        path.write_text(json.dumps(config, indent=2), encoding="utf-8")
        return path

    return build
