"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single PASS line on success; a pytest failure is the FAIL
line. The two extractor-integration tests skip when the extractor package
has not been built (see embedder/README.md).
"""

import json
import math
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest

from attrimine.attribution import (
    FileVectorSource,
    TokenVectors,
    TrainingConfig,
    baseline_score,
    bce_loss_and_grad,
    pair_features,
    rank_factors_baseline,
    read_token_vectors,
    split_keys,
)
from attrimine.cli import main as cli_main, read_corpus_artifact, write_corpus_artifact
from attrimine.corpus import Comment, CorpusStats, Sentence, compute_stats
from attrimine.embeddings import EmbeddingStore
from attrimine.evaluation import DetectionOutcome, detection_metrics, fleiss_kappa, resolution_eval
from attrimine.factors import Factor
from attrimine.pruning import prune
from attrimine.topics import LdaConfig, fit_lda, top_tokens

from helpers import (
    run_detection_resolution_experiment,
    run_separable_experiment,
    toy_catalog,
)
from test_pruning import make_catalog, make_store

EMBEDDER_CLI = Path(__file__).resolve().parents[1] / "embedder" / "dist" / "cli.js"

needs_embedder = pytest.mark.skipif(
    not EMBEDDER_CLI.exists(),
    reason="token-vector extractor not built (cd embedder && npm install && npm run build)",
)


def ok(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


class TestGradientOracle:
    def test_gradients_match_finite_differences(self):
        started = time.monotonic()
        rng = np.random.default_rng(101)
        dim = 8
        step = 1e-5
        worst = 0.0
        for _ in range(200):
            sentence = TokenVectors(key=("s", 0), dim=dim,
                                    vectors=rng.normal(size=(int(rng.integers(1, 7)), dim)))
            factor_repr = rng.normal(size=dim)
            features = pair_features(sentence, factor_repr).reshape(1, -1)
            label = np.array([float(rng.integers(0, 2))])
            w = rng.normal(size=2 * dim) * 0.5
            b = float(rng.normal() * 0.5)
            pos_weight = float(rng.uniform(1.0, 4.0))
            _, gw, gb = bce_loss_and_grad(w, b, features, label, pos_weight)
            numeric = np.empty(2 * dim + 1)
            for j in range(2 * dim):
                delta = np.zeros(2 * dim)
                delta[j] = step
                up, _, _ = bce_loss_and_grad(w + delta, b, features, label, pos_weight)
                down, _, _ = bce_loss_and_grad(w - delta, b, features, label, pos_weight)
                numeric[j] = (up - down) / (2 * step)
            up, _, _ = bce_loss_and_grad(w, b + step, features, label, pos_weight)
            down, _, _ = bce_loss_and_grad(w, b - step, features, label, pos_weight)
            numeric[-1] = (up - down) / (2 * step)
            analytic = np.concatenate([gw, [gb]])
            rel = np.linalg.norm(analytic - numeric) / max(
                np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12
            )
            worst = max(worst, rel)
        elapsed = time.monotonic() - started
        assert worst < 1e-4, f"worst relative gradient error {worst}"
        assert elapsed < 5.0, f"gradient oracle took {elapsed:.2f}s"
        ok(f"gradient oracle (200 instances, worst rel err {worst:.2e}, {elapsed:.2f}s)")


class TestSeparableTraining:
    def test_learns_synthetic_categories(self):
        started = time.monotonic()
        model, detected, truth, top_correct, n_positive = run_separable_experiment(
            n_sentences=500, seed=17,
            config=TrainingConfig(learning_rate=0.05, batch_size=4, n_epochs=50,
                                  pos_weight=4.0, dropout_rate=0.1, seed=17),
        )
        elapsed = time.monotonic() - started
        outcome = DetectionOutcome.from_predictions(detected, truth)
        f1 = detection_metrics(outcome).f1
        top1 = top_correct[1] / n_positive
        assert f1 is not None and f1 >= 0.95, f"detection F1 {f1}"
        assert top1 >= 0.95, f"top-1 resolution accuracy {top1}"
        assert elapsed < 30.0, f"separable training took {elapsed:.2f}s"
        ok(f"separable synthetic training (F1 {f1:.3f}, top-1 {top1:.3f}, {elapsed:.1f}s)")


class TestBaselineOracle:
    def test_matches_independent_recomputation(self):
        rng = np.random.default_rng(103)
        vocab = [f"v{i}" for i in range(15)]
        stop = {"v0", "v1"}
        worst = 0.0
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            vectors = {t: rng.normal(size=dim) for t in vocab}
            store = EmbeddingStore(dim=dim, vectors=vectors, stopwords=frozenset(stop))
            n_sentences = int(rng.integers(1, 50))
            df = {t: int(rng.integers(0, n_sentences + 1)) for t in vocab}
            stats = CorpusStats(9, n_sentences, 0, df)
            tokens = tuple(rng.choice(vocab, size=rng.integers(1, 9)))
            phrase = tuple(rng.choice(vocab, size=rng.integers(1, 5)))
            got = baseline_score(Sentence(0, " ".join(tokens), tokens),
                                 Factor("f", phrase, "c"), store, stats)

            # independent oracle: plain loops, idf recomputed inline
            def weighted_sum(tokens_in):
                acc = [0.0] * dim
                for t in tokens_in:
                    if t in stop or t not in vectors:
                        continue
                    weight = math.log((1 + n_sentences) / (1 + df.get(t, 0))) + 1
                    for j in range(dim):
                        acc[j] += weight * float(vectors[t][j])
                return acc

            u, v = weighted_sum(tokens), weighted_sum(phrase)
            nu = math.sqrt(sum(x * x for x in u))
            nv = math.sqrt(sum(x * x for x in v))
            want = 0.0 if nu == 0 or nv == 0 else sum(a * b for a, b in zip(u, v)) / (nu * nv)
            worst = max(worst, abs(got - want))
        assert worst < 1e-9, f"worst baseline deviation {worst}"
        ok(f"baseline oracle equivalence (100 instances, worst abs err {worst:.2e})")


class TestPruningProperties:
    def random_corpus(self, rng):
        tokens = [f"w{i}" for i in range(10)]
        vectors = {t: rng.normal(size=3) for t in tokens}
        vectors["causea"] = rng.normal(size=3)
        vectors["causeb"] = rng.normal(size=3)
        store = make_store(vectors, dim=3, stopwords=frozenset())
        catalog = make_catalog([
            Factor("causea", ("causea",), "a"), Factor("causeb", ("causeb",), "b"),
        ])
        comments = [
            Comment.from_text(
                f"c{i}",
                ". ".join(
                    " ".join(rng.choice(tokens, size=rng.integers(2, 6)))
                    for _ in range(rng.integers(1, 4))
                ),
            )
            for i in range(int(rng.integers(4, 20)))
        ]
        return store, catalog, comments

    def test_monotonicity_identity_and_threshold(self):
        rng = np.random.default_rng(107)
        for _ in range(50):
            store, catalog, comments = self.random_corpus(rng)
            stats = compute_stats(comments)

            identity, _ = prune(comments, catalog, store, stats, percentile=1.0, threshold=-1.0)
            assert identity == comments

            previous = None
            for threshold in (-1.0, -0.25, 0.1, 0.45, 0.8):
                kept, records = prune(comments, catalog, store, stats, 1.0, threshold)
                ids = {c.id for c in kept}
                by_id = {r.comment_id: r for r in records}
                assert all(by_id[i].max_score >= threshold for i in ids)
                if previous is not None:
                    assert ids <= previous
                previous = ids

            previous = None
            for percentile in (0.05, 0.25, 0.5, 0.75, 1.0):
                kept, _ = prune(comments, catalog, store, stats, percentile, -1.0)
                ids = {c.id for c in kept}
                if previous is not None:
                    assert previous <= ids
                previous = ids
        ok("pruning monotonicity, identity, and threshold postcondition (50 corpora)")


class TestLdaRecovery:
    def test_disjoint_vocabulary_purity(self):
        rng = np.random.default_rng(109)
        vocab = {k: [f"t{k}x{i}" for i in range(15)] for k in range(3)}
        comments = [
            Comment.from_text(f"c{k}d{d}", " ".join(rng.choice(vocab[k], size=20)))
            for k in range(3)
            for d in range(40)
        ]
        config = LdaConfig(n_topics=3, alpha=0.1, beta=0.01, n_iterations=1000,
                           burn_in=200, min_count=1, seed=109)
        started = time.monotonic()
        model = fit_lda(comments, config)
        elapsed = time.monotonic() - started

        assert np.allclose(model.topic_word.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(model.doc_topic.sum(axis=1), 1.0, atol=1e-9)
        assert abs(model.topic_proportions.sum() - 1.0) < 1e-9

        purities = []
        for k in range(3):
            tops = top_tokens(model, k, 5)
            counts = {}
            for t in tops:
                counts[t[:2]] = counts.get(t[:2], 0) + 1
            purities.append(max(counts.values()) / len(tops))
        assert min(purities) >= 0.9, f"topic purities {purities}"
        assert elapsed < 20.0, f"1000 sweeps took {elapsed:.2f}s"
        ok(f"lda recovery (purity {min(purities):.2f}, {elapsed:.1f}s for 1000 sweeps)")


class TestFleissKappa:
    def test_exact_and_invariant(self):
        perfect = np.array([[4, 0, 0], [0, 4, 0], [0, 0, 4], [4, 0, 0]])
        assert fleiss_kappa(perfect) == 1.0

        chance = np.array([[2, 0], [0, 2], [1, 1], [1, 1]])
        assert abs(fleiss_kappa(chance) - 0.0) <= 1e-9

        rng = np.random.default_rng(113)
        table = rng.multinomial(5, [0.2, 0.5, 0.3], size=20)
        base = fleiss_kappa(table)
        for perm in ([1, 2, 0], [2, 0, 1], [0, 2, 1]):
            assert abs(fleiss_kappa(table[:, perm]) - base) < 1e-12
        ok("fleiss kappa (perfect exact 1.0, chance 0 within 1e-9, relabel invariant)")


class TestTopKMonotonicity:
    def test_topk_never_decreases(self):
        # the synthetic evaluation run
        _, _, _, top_correct, n_positive = run_separable_experiment(n_sentences=150, seed=19)
        assert top_correct[3] >= top_correct[1]

        # plus randomized evaluation runs
        rng = np.random.default_rng(127)
        categories = [f"cat{i}" for i in range(8)]
        for _ in range(20):
            n = int(rng.integers(5, 40))
            predictions = [list(rng.permutation(categories)) for _ in range(n)]
            truths = [{categories[int(rng.integers(0, 8))]} for _ in range(n)]
            outcome = resolution_eval(predictions, truths, ks=(1, 3))
            assert outcome.accuracy(3) >= outcome.accuracy(1)
        ok("top-k monotonicity (resolution+top3 >= resolution on every run)")


class TestPipelineDeterminism:
    STAGES = ("ingest", "prune", "topics", "train", "eval")

    def run_pipeline(self, config_path):
        for stage in self.STAGES:
            assert cli_main([stage, "--config", str(config_path)]) == 0, stage

    def artifact_bytes(self, out_dir: Path) -> dict[str, bytes]:
        files = {}
        for path in sorted(out_dir.rglob("*")):
            if path.is_file() and path.name != "manifest.json":
                files[str(path.relative_to(out_dir))] = path.read_bytes()
        return files

    def test_two_runs_byte_identical(self, mini_config_factory):
        started = time.monotonic()
        config_a = mini_config_factory("det_a", seed=7)
        config_b = mini_config_factory("det_b", seed=7)
        self.run_pipeline(config_a)
        self.run_pipeline(config_b)
        out_a = Path(json.loads(config_a.read_text())["paths"]["out_dir"])
        out_b = Path(json.loads(config_b.read_text())["paths"]["out_dir"])
        files_a = self.artifact_bytes(out_a)
        files_b = self.artifact_bytes(out_b)
        elapsed = time.monotonic() - started
        assert set(files_a) == set(files_b)
        assert len(files_a) >= 12
        for name in files_a:
            assert files_a[name] == files_b[name], f"artifact differs: {name}"
        assert elapsed < 60.0, f"two pipeline runs took {elapsed:.1f}s"
        ok(f"pipeline determinism ({len(files_a)} artifacts byte-identical, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# extractor integration


def run_extractor(args):
    result = subprocess.run(
        ["node", str(EMBEDDER_CLI), *args],
        capture_output=True, text=True, timeout=300,
    )
    assert result.returncode == 0, result.stderr
    return result


@needs_embedder
class TestExtractorRoundTrip:
    def test_mini_corpus_alignment_and_contextuality(self, mini_config_factory, tmp_path):
        config = mini_config_factory("xtr")
        assert cli_main(["ingest", "--config", str(config)]) == 0
        corpus_path = Path(json.loads(config.read_text())["paths"]["out_dir"]) / "ingest" / "corpus.jsonl"
        out = tmp_path / "sentence_vectors.txt"
        run_extractor(["--corpus", str(corpus_path), "--out", str(out)])

        comments = read_corpus_artifact(corpus_path)
        _, blocks = read_token_vectors(out)
        mismatches = 0
        n_sentences = 0
        for comment in comments:
            for sentence in comment.sentences:
                n_sentences += 1
                block = blocks.get((comment.id, sentence.index))
                if block is None or block.n_tokens != len(sentence.tokens):
                    mismatches += 1
        assert n_sentences > 0
        assert mismatches == 0, f"{mismatches}/{n_sentences} sentences misaligned"
        errors_file = out.with_suffix(".errors.txt")
        assert not errors_file.exists() or errors_file.read_text().strip() == ""

        # contextuality witness: the same token in different sentences gets
        # different vectors
        positions = {}
        for comment in comments:
            for sentence in comment.sentences:
                for i, token in enumerate(sentence.tokens):
                    positions.setdefault(token, []).append(((comment.id, sentence.index), i))
        witness = next(
            (t for t, places in positions.items()
             if len({key for key, _ in places}) >= 2),
            None,
        )
        assert witness is not None
        places = positions[witness]
        (key_a, i_a), (key_b, i_b) = places[0], next(p for p in places if p[0] != places[0][0])
        vec_a = blocks[key_a].vectors[i_a]
        vec_b = blocks[key_b].vectors[i_b]
        assert not np.allclose(vec_a, vec_b), f"token {witness!r} identical across contexts"
        ok(f"extractor round trip ({n_sentences} sentences aligned, witness token {witness!r})")


@needs_embedder
class TestFrozenContextualPipeline:
    def build_synthetic(self, tmp_path, seed=211):
        # sentences never contain a factor phrase verbatim; they use inflected
        # variants that share subword pieces with it, which a word-level
        # static vocabulary cannot see but the piece-based extractor can
        rng = np.random.default_rng(seed)
        fillers = [f"fill{j}" for j in range(10)]
        comments = []
        n_categories = 5
        for i in range(250):
            if i < 50:
                tokens = list(rng.choice(fillers, size=rng.integers(4, 8)))
                labels = frozenset()
            else:
                k = (i - 50) % n_categories
                variants = [f"cause{k}ing", f"cause{k}ed", f"cause{k}s"]
                tokens = list(rng.choice(variants, size=2)) + list(rng.choice(fillers, size=rng.integers(3, 6)))
                rng.shuffle(tokens)
                labels = frozenset({f"cat{k}"})
            comment = Comment.from_text(f"s{i:03d}", " ".join(tokens))
            sentence = comment.sentences[0]
            comments.append(Comment(
                comment.id, "", "", comment.raw_text,
                (Sentence(0, sentence.text, sentence.tokens, labels),),
            ))
        corpus_path = tmp_path / "synthetic_corpus.jsonl"
        write_corpus_artifact(comments, corpus_path)
        catalog = toy_catalog(n_categories)
        catalog_path = tmp_path / "catalog.tsv"
        lines = [f"CATEGORY\t{c}\t{c}" for c in catalog.category_ids]
        lines += [f"FACTOR\t{f.id}\t{' '.join(f.phrase)}\t{f.category}" for f in catalog.factors.values()]
        catalog_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return comments, catalog, corpus_path, catalog_path

    def test_trained_contextual_beats_static_baseline(self, tmp_path):
        comments, catalog, corpus_path, catalog_path = self.build_synthetic(tmp_path)
        sentence_out = tmp_path / "sentences.txt"
        factor_out = tmp_path / "factors.txt"
        run_extractor(["--corpus", str(corpus_path), "--out", str(sentence_out)])
        run_extractor(["--factors", str(catalog_path), "--out", str(factor_out)])

        source = FileVectorSource.from_files(sentence_out, factor_out)
        config = TrainingConfig(learning_rate=0.05, batch_size=8, n_epochs=40,
                                pos_weight=4.0, dropout_rate=0.1, seed=211)
        model, detected, truth, top_correct, n_positive = run_detection_resolution_experiment(
            comments, catalog, source, config,
        )
        contextual_top1 = top_correct[1] / n_positive

        # static baseline: uninformative random vectors, mirroring a static
        # vocabulary that misses the discriminative tokens
        rng = np.random.default_rng(331)
        tokens = {t for c in comments for s in c.sentences for t in s.tokens}
        tokens |= {t for f in catalog.factors.values() for t in f.phrase}
        store = EmbeddingStore(
            dim=16, vectors={t: rng.normal(size=16) for t in sorted(tokens)},
            stopwords=frozenset(),
        )
        stats = compute_stats(comments)
        keys = [(c.id, s.index) for c in comments for s in c.sentences if s.labels is not None and s.tokens]
        _, holdout_keys = split_keys(keys, config.holdout_fraction, config.seed)
        by_key = {(c.id, s.index): s for c in comments for s in c.sentences}
        baseline_correct = 0
        baseline_total = 0
        for key in holdout_keys:
            sentence = by_key[key]
            if not sentence.is_positive:
                continue
            ranked = rank_factors_baseline(sentence, catalog, store, stats)
            baseline_total += 1
            if catalog.category_of(ranked[0][0]) in sentence.labels:
                baseline_correct += 1
        baseline_top1 = baseline_correct / baseline_total

        assert contextual_top1 > baseline_top1, (
            f"contextual {contextual_top1:.3f} did not beat baseline {baseline_top1:.3f}"
        )
        ok(f"frozen-contextual pipeline (top-1 {contextual_top1:.3f} vs baseline {baseline_top1:.3f})")
