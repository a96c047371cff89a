"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one `ACCEPTANCE <criterion>: PASS` line on success (visible
with `pytest -s` or in the captured-output section); a failing criterion
fails its test. Run with:

    pytest tests/test_acceptance.py -v
"""

import hashlib
import json
import math
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from helpers import ladder_corpus, random_corpus, synthetic_dataset
from leadopt.campaign import (
    CampaignConfig,
    frechet_distance,
    frechet_from_features,
    percentile,
    run_campaign,
)
from leadopt.campaign.filtering import consensus_verdict
from leadopt.data import prepare_pools, save_dataset
from leadopt.errors import SmilesError
from leadopt.features import build_fragment_vocabulary, circular_fingerprint, mol2vec_embed
from leadopt.fragments import fragment_tokens
from leadopt.generation import GeneratorBackendConfig
from leadopt.molgraph import canonical_smiles, parse_smiles, to_canonical, write_smiles
from leadopt.properties import crippen_logp, ertl_tpsa, molecular_weight
from leadopt.properties.tables import crippen_contributions
from leadopt.qsar import GbtParams, cross_validate, train_gbt


def report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class TestParserSuite:
    def test_parser_corpus_and_fuzz(self):
        start = time.monotonic()

        corpus = random_corpus(2027, 1000)
        assert len(corpus) == 1000
        rng = random.Random(5150)
        for smiles in corpus:
            mol = parse_smiles(smiles)
            canon = to_canonical(mol)
            # idempotence
            assert to_canonical(parse_smiles(canon)) == canon
            # atom-order invariance under a random permutation
            perm = list(range(len(mol.atoms)))
            rng.shuffle(perm)
            assert canonical_smiles(write_smiles(mol, perm)) == canon

        for _ in range(10_000):
            raw = bytes(rng.randrange(256) for _ in range(rng.randint(1, 24)))
            try:
                parse_smiles(raw.decode("latin-1"))
            except SmilesError:
                pass  # structured rejection is the contract

        elapsed = time.monotonic() - start
        assert elapsed < 30.0, f"parser suite took {elapsed:.1f}s (budget 30s)"
        report(f"parser corpus+fuzz ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# Property oracles
# ---------------------------------------------------------------------------

class TestPropertyOracles:
    def test_property_oracles(self):
        assert molecular_weight(parse_smiles("O")) == pytest.approx(18.015, abs=0.01)
        assert ertl_tpsa(parse_smiles("CCO")) == pytest.approx(20.23, abs=0.01)
        assert ertl_tpsa(parse_smiles("c1ccncc1")) == pytest.approx(12.89, abs=0.01)
        assert ertl_tpsa(parse_smiles("CCCCCC")) == 0.0

        table = crippen_contributions()
        expected = 0.0
        for _ in range(6):
            expected += table["C18"]
            expected += table["H1"]
        assert crippen_logp(parse_smiles("c1ccccc1")) == expected
        report("property oracles")


# ---------------------------------------------------------------------------
# Fingerprint fixed vectors
# ---------------------------------------------------------------------------

FROZEN_VECTORS = {
    # (smiles, radius): (set bits, sha256 prefix of the hex encoding)
    ("C", 3): (1, "124f9dd99affcef4"),
    ("CC", 1): (2, "31697e1997087b2c"),
    ("CCO", 3): (6, "855250ac7f4ee1a2"),
    ("c1ccccc1", 3): (4, "bc09a437e23bca63"),
    ("CC(=O)Oc1ccccc1C(=O)O", 3): (32, "27a6781d1550b522"),
}


class TestFingerprintVectors:
    def test_fixed_vectors(self):
        for (smiles, radius), (bits, digest) in FROZEN_VECTORS.items():
            fp = circular_fingerprint(parse_smiles(smiles), radius, 2048)
            assert fp.set_count == bits, smiles
            assert hashlib.sha256(fp.to_hex().encode()).hexdigest()[:16] == digest, smiles
        report("fingerprint fixed vectors")


# ---------------------------------------------------------------------------
# Embedding identity
# ---------------------------------------------------------------------------

class TestEmbeddingIdentity:
    def test_embedding_identities(self):
        methane = parse_smiles("C")
        vocab = build_fragment_vocabulary([methane], radius=0, dim=16, seed=0, epochs=1)
        token = fragment_tokens(methane, 0)[0]
        assert np.array_equal(mol2vec_embed(methane, vocab), vocab.vector(token))

        ethane = parse_smiles("CC")
        vocab2 = build_fragment_vocabulary([ethane], radius=1, dim=16, seed=0, epochs=1)
        t1, t2 = sorted(set(fragment_tokens(ethane, 1)))
        mean = (vocab2.vector(t1) + vocab2.vector(t2)) / 2
        assert np.allclose(mol2vec_embed(ethane, vocab2), mean, atol=1e-12)
        report("embedding mean identities")


# ---------------------------------------------------------------------------
# QSAR
# ---------------------------------------------------------------------------

class TestQsarCriteria:
    def test_qsar_cv_and_monotonicity(self):
        start = time.monotonic()

        rng = np.random.default_rng(11)
        X = rng.random((150, 8))
        y = X[:, 0] * 3 + 0.2 * rng.standard_normal(150)
        model = train_gbt(X, y, GbtParams(n_trees=80, max_depth=3))
        for k in range(len(model.train_mse) - 1):
            assert model.train_mse[k + 1] <= model.train_mse[k] + 1e-12

        smiles = ladder_corpus(3001, 300)
        mols = [parse_smiles(s) for s in smiles]
        noise = np.random.default_rng(42).normal(0.0, 0.3, size=300)
        labels = [
            0.02 * molecular_weight(m) + float(e) for m, e in zip(mols, noise)
        ]
        vocab = build_fragment_vocabulary(mols, radius=1, dim=24, seed=0, epochs=3)
        params = GbtParams(n_trees=40, max_depth=3, learning_rate=0.15)
        reports = cross_validate(mols, labels, vocab, params, folds=10, seed=0)
        for view, rep in reports.items():
            assert rep.mean_r2 >= 0.7, f"{view} view CV R2 {rep.mean_r2:.3f}"

        # bit-identical CvReport under a fixed seed (same code path, small set)
        sub_mols, sub_labels = mols[:60], labels[:60]
        small = GbtParams(n_trees=10, max_depth=2)
        first = cross_validate(sub_mols, sub_labels, vocab, small, folds=3, seed=4)
        second = cross_validate(sub_mols, sub_labels, vocab, small, folds=3, seed=4)
        assert first == second

        elapsed = time.monotonic() - start
        assert elapsed < 60.0, f"QSAR criteria took {elapsed:.1f}s (budget 60s)"
        report(
            "qsar boosting+cv ("
            + ", ".join(f"{v} R2={r.mean_r2:.3f}" for v, r in reports.items())
            + f", {elapsed:.1f}s)"
        )


# ---------------------------------------------------------------------------
# Consensus filter
# ---------------------------------------------------------------------------

class TestConsensusCriterion:
    def test_consensus_rule_oracle(self):
        rng = random.Random(2718)
        for _ in range(100):
            triple = {
                "fingerprint": rng.uniform(0, 12),
                "descriptor": rng.uniform(0, 12),
                "embedding": rng.uniform(0, 12),
            }
            cutoff = rng.uniform(0, 12)
            accept, label = consensus_verdict(triple, cutoff)
            assert accept == all(v > cutoff for v in triple.values())
            assert label == pytest.approx(sum(triple.values()) / 3, abs=1e-12)
        report("consensus filter oracle (100 triples)")


# ---------------------------------------------------------------------------
# Campaign dynamics
# ---------------------------------------------------------------------------

class TestCampaignDynamics:
    def test_campaign_dynamics_ten_seeds(
        self, campaign_dataset, campaign_vocab, campaign_ensemble
    ):
        start = time.monotonic()
        grew = []
        for seed in range(10):
            config = CampaignConfig(
                initial_shots=40,
                max_iterations=5,
                batch_size=40,
                backend=GeneratorBackendConfig(
                    kind="mock", seed=seed, mutation_rate=0.05,
                ),
                seed=0,
                gbt=GbtParams(n_trees=120, max_depth=3, learning_rate=0.1),
                vocab_radius=1,
                vocab_dim=32,
                vocab_epochs=2,
            )
            reports, ctx = run_campaign(
                campaign_dataset, config,
                vocab=campaign_vocab, ensemble=campaign_ensemble,
            )

            # context grows by >= 1 on every accepting iteration, and the
            # run as a whole must accept at least once
            sizes = [40] + [r.context_size for r in reports]
            for r, before, after in zip(reports, sizes, sizes[1:]):
                if r.accepted > 0:
                    assert after >= before + 1
                else:
                    assert after == before
            assert len(ctx) > 40, f"seed {seed} accepted nothing in 5 iterations"
            grew.append(len(ctx) - 40)

            cutoffs = [r.cutoff for r in reports]
            assert all(b >= a for a, b in zip(cutoffs, cutoffs[1:])), cutoffs

            # median context label never decreases across iterations
            medians = []
            for upto in range(0, 6):
                labels = [
                    e.activity for e in ctx.entries if e.iteration_added <= upto
                ]
                medians.append(percentile(labels, 50.0))
            assert all(b >= a - 1e-12 for a, b in zip(medians, medians[1:]))

        elapsed = time.monotonic() - start
        assert elapsed < 120.0, f"campaign dynamics took {elapsed:.1f}s (budget 120s)"
        report(f"campaign dynamics seeds 0-9 (growth {grew}, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# Percentile
# ---------------------------------------------------------------------------

class TestPercentileCriterion:
    def test_percentile_oracle(self):
        values = [float(x) for x in range(1, 11)]
        assert percentile(values, 80.0) == pytest.approx(8.2, abs=1e-12)
        # independent direct-formula oracle
        ordered = sorted(values)
        rank = 80.0 / 100.0 * 9
        below = math.floor(rank)
        expected = ordered[below] + (rank - below) * (ordered[below + 1] - ordered[below])
        assert percentile(values, 80.0) == pytest.approx(expected, abs=1e-12)
        report("percentile cutoff")


# ---------------------------------------------------------------------------
# Frechet distance
# ---------------------------------------------------------------------------

class TestFrechetCriteria:
    def test_frechet_cases(self, small_vocab):
        mols = [parse_smiles(s) for s in random_corpus(404, 6)]
        assert frechet_distance(mols, mols, small_vocab) == pytest.approx(0.0, abs=1e-9)

        a = np.array([[0.0], [1.0], [2.0]])
        assert frechet_from_features(a, a + 1.0) == pytest.approx(1.0, abs=1e-9)

        from scipy import linalg

        rng = np.random.default_rng(7)
        fa = rng.normal(size=(40, 3)) @ rng.normal(size=(3, 3))
        fb = rng.normal(size=(40, 3)) @ rng.normal(size=(3, 3)) + 0.5
        mu_a, mu_b = fa.mean(axis=0), fb.mean(axis=0)
        eps = 1e-6 * np.eye(3)
        cov_a = np.cov(fa, rowvar=False) + eps
        cov_b = np.cov(fb, rowvar=False) + eps
        oracle = float(
            ((mu_a - mu_b) ** 2).sum()
            + np.trace(cov_a + cov_b - 2 * linalg.sqrtm(cov_a @ cov_b).real)
        )
        assert frechet_from_features(fa, fb) == pytest.approx(oracle, abs=1e-6)
        report("frechet distance (identical, 1-D analytic, 3-D oracle)")


# ---------------------------------------------------------------------------
# Metrics edge cases
# ---------------------------------------------------------------------------

class TestMetricsEdgeCases:
    def test_metric_edges_and_count_ordering(
        self, small_vocab, campaign_dataset, campaign_vocab, campaign_ensemble
    ):
        from leadopt.campaign import eval_batch
        from leadopt.generation.parsing import GeneratedBatch, classify_smiles

        def batch_of(smiles_list):
            b = GeneratedBatch(raw_response="(test)")
            seen = set()
            for s in smiles_list:
                m = classify_smiles(s)
                if m.canonical is not None:
                    if m.canonical in seen:
                        m.duplicate = True
                    seen.add(m.canonical)
                b.molecules.append(m)
            return b

        train_smiles = random_corpus(505, 5)
        train = {to_canonical(parse_smiles(s)) for s in train_smiles}
        lead = [parse_smiles(s) for s in train_smiles]

        subset = eval_batch(batch_of(train_smiles), train, lead, small_vocab)
        assert subset.novelty_rate == 0.0

        copies = eval_batch(batch_of(["CCO"] * 4), train, lead, small_vocab)
        assert copies.internal_diversity == 0.0

        disjoint = eval_batch(
            batch_of(["CCCC", "c1ccccc1", "OO", "N"]), train, lead, small_vocab
        )
        assert disjoint.internal_diversity == 1.0

        # accepted <= unique <= valid <= generated on every mock report
        config = CampaignConfig(
            initial_shots=40, max_iterations=3, batch_size=25,
            backend=GeneratorBackendConfig(kind="mock", seed=3, mutation_rate=0.05),
            seed=0, gbt=GbtParams(n_trees=120, max_depth=3, learning_rate=0.1),
            vocab_radius=1, vocab_dim=32, vocab_epochs=2,
        )
        reports, _ = run_campaign(
            campaign_dataset, config, vocab=campaign_vocab, ensemble=campaign_ensemble,
        )
        for r in reports:
            assert r.accepted <= r.unique <= r.valid <= r.generated
        report("metrics edge cases + count ordering")


# ---------------------------------------------------------------------------
# Pools
# ---------------------------------------------------------------------------

class TestPoolsCriterion:
    def test_pools_on_200_molecules(self):
        import copy

        ds = synthetic_dataset(808, 200)
        a = prepare_pools(copy.deepcopy(ds))
        b = prepare_pools(copy.deepcopy(ds))
        assert len(a.best20) == 20
        assert len(a.pool50) == 50
        assert not set(a.best20) & set(a.allminus20)
        assert not set(a.best20) & set(a.pool50)
        assert (a.best20, a.pool50, a.allminus20) == (b.best20, b.pool50, b.allminus20)
        report("pools best20/pool50/allminus20")


# ---------------------------------------------------------------------------
# End-to-end CLI
# ---------------------------------------------------------------------------

CLI_CONFIG = {
    "initial_shots": 30,
    "max_iterations": 3,
    "batch_size": 20,
    "backend": {"kind": "mock", "seed": 8, "mutation_rate": 0.05},
    "gbt": {"n_trees": 40, "max_depth": 3, "learning_rate": 0.12,
            "min_leaf": 3, "seed": 0},
    "vocab_radius": 1,
    "vocab_dim": 16,
    "vocab_epochs": 1,
    "vocab_augment": 1,
}


class TestEndToEndCli:
    def test_cli_pipeline_with_crash_resume(self, tmp_path):
        start = time.monotonic()

        def cli(*args):
            result = subprocess.run(
                [sys.executable, "-m", "leadopt.cli", *args],
                capture_output=True, text=True, cwd=tmp_path, timeout=280,
            )
            assert result.returncode == 0, result.stderr
            return result.stdout

        ds = synthetic_dataset(77, 90)
        save_dataset(ds, tmp_path / "input.csv")
        (tmp_path / "config.json").write_text(json.dumps(CLI_CONFIG))

        cli("--data-dir", "data", "prep", "--input", "input.csv", "--target", "T1")
        out = cli("--data-dir", "data", "--config", "config.json",
                  "train", "--dataset", "T1", "--folds", "3")
        assert "descriptor" in out

        cli("--data-dir", "data", "--config", "config.json",
            "campaign", "run", "--dataset", "T1", "--id", "full")
        report_out = cli("--data-dir", "data", "campaign", "report", "--id", "full")
        assert "finished" in report_out

        # crash simulation: stop after one iteration, then resume
        cli("--data-dir", "data", "--config", "config.json",
            "campaign", "run", "--dataset", "T1", "--id", "part",
            "--iterations", "1")
        state_path = tmp_path / "data" / "campaigns" / "part" / "state.json"
        state = json.loads(state_path.read_text())
        state["config"]["max_iterations"] = CLI_CONFIG["max_iterations"]
        state_path.write_text(json.dumps(state))
        handle_path = tmp_path / "data" / "campaigns" / "part" / "handle.json"
        handle = json.loads(handle_path.read_text())
        handle["status"] = "paused"
        handle_path.write_text(json.dumps(handle))
        cli("--data-dir", "data", "campaign", "resume", "--id", "part")

        full_state = json.loads(
            (tmp_path / "data" / "campaigns" / "full" / "state.json").read_text()
        )
        part_state = json.loads(state_path.read_text())
        assert part_state["reports"] == full_state["reports"]
        assert part_state["context"] == full_state["context"]

        elapsed = time.monotonic() - start
        assert elapsed < 300.0, f"CLI pipeline took {elapsed:.1f}s (budget 300s)"
        report(f"end-to-end CLI with crash-resume ({elapsed:.1f}s)")
