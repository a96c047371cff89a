"""The iterative semi-supervised campaign loop.

Each iteration: take the activity cutoff at the configured percentile of the
current context, prompt the generator with the full context (subject to the
character budget), filter candidates through the three-view consensus rule,
append the survivors with their consensus labels, and report metrics. The
evaluator ensemble is trained once on experimental data and never retrained
on generated molecules.

State persists after every iteration, so a killed campaign resumes from the
last completed iteration with an identical transcript under the mock
backend.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from leadopt.campaign.context import (
    Context,
    ContextEntry,
    GENERATED,
    init_context,
    percentile,
    percentile_cutoff,
)
from leadopt.campaign.filtering import FilterResult, REASON_CONDITION_FAIL, RejectedCandidate, filter_and_label
from leadopt.campaign.metrics import DescriptorScaler, eval_batch
from leadopt.data import TargetDataset
from leadopt.errors import BackendError, ValidationError
from leadopt.features import FragmentVocabulary, build_fragment_vocabulary
from leadopt.generation import (
    AuditLog,
    GeneratedBatch,
    GeneratorBackendConfig,
    PromptExample,
    PromptSpec,
    build_generation_prompt,
    generate_batch,
    truncate_to_budget,
)
from leadopt.generation.mutations import mutate_molecule
from leadopt.molgraph import MolGraph, parse_smiles, to_canonical
from leadopt.properties import ConditionSpec, check_conditions, property_profile
from leadopt.qsar import (
    EnsemblePredictor,
    GbtParams,
    consensus_predict_batch,
    train_ensemble,
)

log = logging.getLogger(__name__)

STATE_SCHEMA = "leadopt-campaign-state-v1"

CUTOFF_BASIS_CONTEXT = "context"
CUTOFF_BASIS_INITIAL = "initial"


@dataclass(frozen=True)
class CampaignConfig:
    initial_shots: int = 500
    max_iterations: int = 10
    batch_size: int = 40
    cutoff_percentile: float = 80.0
    conditions: tuple[ConditionSpec, ...] = ()
    backend: GeneratorBackendConfig = field(default_factory=GeneratorBackendConfig)
    seed: int = 0
    char_budget: int | None = None
    include_extra_labels: bool = False
    cutoff_basis: str = CUTOFF_BASIS_CONTEXT
    strict_conditions: bool = False
    early_stop_zero_rounds: int = 3
    gbt: GbtParams = field(default_factory=GbtParams)
    vocab_radius: int = 2
    vocab_dim: int = 128
    vocab_epochs: int = 5
    # Mutational variants per record added to the vocabulary corpus, so
    # generated chemistry stays largely in-vocabulary for the embedding view.
    vocab_augment: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.cutoff_percentile < 100.0:
            raise ValidationError("cutoff_percentile must be in (0, 100)")
        if self.initial_shots < 1:
            raise ValidationError("initial_shots must be >= 1")
        if self.cutoff_basis not in (CUTOFF_BASIS_CONTEXT, CUTOFF_BASIS_INITIAL):
            raise ValidationError(f"unknown cutoff basis {self.cutoff_basis!r}")

    def to_dict(self) -> dict:
        return {
            "initial_shots": self.initial_shots,
            "max_iterations": self.max_iterations,
            "batch_size": self.batch_size,
            "cutoff_percentile": self.cutoff_percentile,
            "conditions": [c.to_dict() for c in self.conditions],
            "backend": self.backend.to_dict(),
            "seed": self.seed,
            "char_budget": self.char_budget,
            "include_extra_labels": self.include_extra_labels,
            "cutoff_basis": self.cutoff_basis,
            "strict_conditions": self.strict_conditions,
            "early_stop_zero_rounds": self.early_stop_zero_rounds,
            "gbt": self.gbt.to_dict(),
            "vocab_radius": self.vocab_radius,
            "vocab_dim": self.vocab_dim,
            "vocab_epochs": self.vocab_epochs,
            "vocab_augment": self.vocab_augment,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        data = dict(data)
        data["conditions"] = tuple(
            ConditionSpec.from_dict(c) for c in data.get("conditions", [])
        )
        data["backend"] = GeneratorBackendConfig.from_dict(data["backend"])
        data["gbt"] = GbtParams.from_dict(data["gbt"])
        return cls(**data)


@dataclass(frozen=True)
class IterationReport:
    iteration: int
    cutoff: float
    generated: int
    valid: int
    unique: int
    novel: int
    accepted: int
    context_size: int
    prediction_summary: dict[str, float]
    condition_pass_rates: dict[str, float]
    internal_diversity: float
    frechet_to_lead: float | None
    truncated_examples: int
    rejection_reasons: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "cutoff": self.cutoff,
            "generated": self.generated,
            "valid": self.valid,
            "unique": self.unique,
            "novel": self.novel,
            "accepted": self.accepted,
            "context_size": self.context_size,
            "prediction_summary": self.prediction_summary,
            "condition_pass_rates": self.condition_pass_rates,
            "internal_diversity": self.internal_diversity,
            "frechet_to_lead": self.frechet_to_lead,
            "truncated_examples": self.truncated_examples,
            "rejection_reasons": self.rejection_reasons,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IterationReport":
        return cls(**data)


def _prediction_summary(values: list[float]) -> dict[str, float]:
    if not values:
        return {}
    return {
        "min": min(values),
        "q1": percentile(values, 25.0),
        "median": percentile(values, 50.0),
        "q3": percentile(values, 75.0),
        "max": max(values),
    }


def _context_prompt_examples(
    context: Context,
    include_extra: bool,
    vocab: FragmentVocabulary,
) -> tuple[PromptExample, ...]:
    examples = []
    for smiles, activity in context.pairs_by_activity():
        extra: dict[str, float] = {}
        if include_extra:
            profile = property_profile(parse_smiles(smiles), vocab)
            extra = {k: round(v, 3) for k, v in profile.as_dict().items()}
        examples.append(PromptExample(smiles=smiles, activity=activity, extra=extra))
    return tuple(examples)


def _apply_condition_gate(
    result: FilterResult,
    conditions: tuple[ConditionSpec, ...],
    vocab: FragmentVocabulary,
) -> FilterResult:
    """Strict mode: require every property condition on top of activity."""
    kept = []
    for cand in result.accepted:
        profile = property_profile(parse_smiles(cand.canonical), vocab)
        flags = check_conditions(profile, cand.label, list(conditions))
        if all(flags.values()):
            kept.append(cand)
        else:
            failed = [k for k, ok in flags.items() if not ok]
            result.rejected.append(RejectedCandidate(
                smiles=cand.canonical,
                reason=REASON_CONDITION_FAIL,
                detail="; ".join(failed),
            ))
    result.accepted = kept
    return result


def run_iteration(
    state: Context,
    config: CampaignConfig,
    ens: EnsemblePredictor,
    vocab: FragmentVocabulary,
    lead: str,
    iteration: int,
    train_canonicals: set[str],
    lead_set: list[MolGraph],
    scaler: DescriptorScaler | None = None,
    audit: AuditLog | None = None,
) -> tuple[Context, IterationReport]:
    """One generate-filter-expand step; the context is grown in place."""
    if config.cutoff_basis == CUTOFF_BASIS_INITIAL:
        basis = [e.activity for e in state.experimental_entries()]
        cutoff = percentile(basis, config.cutoff_percentile)
    else:
        cutoff = percentile_cutoff(state, config.cutoff_percentile)

    spec = PromptSpec(
        examples=_context_prompt_examples(state, config.include_extra_labels, vocab),
        conditions=config.conditions,
        lead=lead,
        batch_size=config.batch_size,
    )
    spec, truncated = truncate_to_budget(
        spec, config.char_budget, config.include_extra_labels
    )
    prompt = build_generation_prompt(spec, config.include_extra_labels)

    try:
        batch = generate_batch(config.backend, prompt, audit=audit)
    except BackendError as exc:
        log.warning("iteration %d: backend failed after retries: %s", iteration, exc)
        batch = GeneratedBatch(raw_response=str(exc))
    batch.truncated_examples = truncated

    result = filter_and_label(batch, ens, cutoff, state)
    if config.strict_conditions and config.conditions:
        result = _apply_condition_gate(result, config.conditions, vocab)

    for cand in result.accepted:
        state.add(ContextEntry(
            smiles=cand.canonical,
            activity=cand.label,
            origin=GENERATED,
            iteration_added=iteration,
        ))

    valid = batch.valid_molecules
    valid_mols = [parse_smiles(m.canonical) for m in valid]
    predictions: list[float] = []
    pass_counts: dict[str, int] = {}
    if valid_mols:
        per_view_all = consensus_predict_batch(ens, valid_mols)
        for mol, per_view in zip(valid_mols, per_view_all):
            label = sum(per_view.values()) / len(per_view)
            predictions.append(label)
            if config.conditions:
                profile = property_profile(mol, vocab)
                flags = check_conditions(profile, label, list(config.conditions))
                for key, ok in flags.items():
                    pass_counts[key] = pass_counts.get(key, 0) + (1 if ok else 0)

    metrics = None
    if batch.molecules:
        metrics = eval_batch(batch, train_canonicals, lead_set, vocab, scaler=scaler)

    reasons: dict[str, int] = {}
    for rej in result.rejected:
        reasons[rej.reason] = reasons.get(rej.reason, 0) + 1

    report = IterationReport(
        iteration=iteration,
        cutoff=cutoff,
        generated=len(batch.molecules),
        valid=len(valid),
        unique=len({m.canonical for m in valid}),
        novel=sum(1 for m in valid if m.canonical not in train_canonicals),
        accepted=len(result.accepted),
        context_size=len(state),
        prediction_summary=_prediction_summary(predictions),
        condition_pass_rates={
            k: v / len(valid_mols) for k, v in pass_counts.items()
        } if valid_mols else {},
        internal_diversity=metrics.internal_diversity if metrics else 0.0,
        frechet_to_lead=metrics.frechet_distance if metrics else None,
        truncated_examples=truncated,
        rejection_reasons=reasons,
    )
    return state, report


@dataclass
class CampaignState:
    """Everything needed to resume: config, context, reports, cursor."""

    config: CampaignConfig
    context: Context
    reports: list[IterationReport] = field(default_factory=list)
    completed_iterations: int = 0
    status: str = "created"

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        payload = {
            "schema": STATE_SCHEMA,
            "config": self.config.to_dict(),
            "context": self.context.to_dicts(),
            "reports": [r.to_dict() for r in self.reports],
            "completed_iterations": self.completed_iterations,
            "status": self.status,
        }
        tmp = directory / "state.json.tmp"
        tmp.write_text(json.dumps(payload))
        tmp.replace(directory / "state.json")

    @classmethod
    def load(cls, directory: str | Path) -> "CampaignState":
        payload = json.loads((Path(directory) / "state.json").read_text())
        if payload.get("schema") != STATE_SCHEMA:
            raise ValidationError(f"not a campaign state directory: {directory}")
        return cls(
            config=CampaignConfig.from_dict(payload["config"]),
            context=Context.from_dicts(payload["context"]),
            reports=[IterationReport.from_dict(r) for r in payload["reports"]],
            completed_iterations=payload["completed_iterations"],
            status=payload["status"],
        )


def _campaign_assets(
    dataset: TargetDataset,
    config: CampaignConfig,
    vocab: FragmentVocabulary | None,
    state_dir: Path | None,
    ensemble: EnsemblePredictor | None = None,
) -> tuple[FragmentVocabulary, EnsemblePredictor, list[MolGraph], set[str], DescriptorScaler]:
    """Vocabulary, frozen ensemble, lead set, train set, and scaler.

    Artifacts persist beside the state file; a resumed campaign reloads them
    rather than retraining.
    """
    mols = [parse_smiles(r.smiles) for r in dataset.records]
    labels = [r.activity for r in dataset.records]

    vocab_path = state_dir / "vocab.json" if state_dir else None
    ens_path = state_dir / "ensemble.json" if state_dir else None

    if vocab is None:
        if vocab_path is not None and vocab_path.exists():
            vocab = FragmentVocabulary.load(vocab_path)
        else:
            corpus = list(mols)
            if config.vocab_augment > 0:
                aug_rng = random.Random(config.seed)
                for mol in mols:
                    for _ in range(config.vocab_augment):
                        corpus.append(mutate_molecule(mol, aug_rng, 2)[0])
            vocab = build_fragment_vocabulary(
                corpus,
                radius=config.vocab_radius,
                dim=config.vocab_dim,
                seed=config.seed,
                epochs=config.vocab_epochs,
            )
            if vocab_path is not None:
                vocab.save(vocab_path)

    if ensemble is not None:
        ens = ensemble
    elif ens_path is not None and ens_path.exists():
        ens = EnsemblePredictor.load(ens_path, vocab)
    else:
        ens = train_ensemble(mols, labels, vocab, config.gbt)
        if ens_path is not None:
            ens.save(ens_path)

    if dataset.pools_ready and dataset.pool50:
        lead_records = dataset.pool_records("pool50")
    else:
        lead_records = sorted(
            dataset.records, key=lambda r: (-r.activity, r.smiles)
        )[:min(len(dataset.records), 50)]
    lead_set = [parse_smiles(r.smiles) for r in lead_records]
    train_canonicals = {r.smiles for r in dataset.records}
    scaler = DescriptorScaler.fit(lead_set)
    return vocab, ens, lead_set, train_canonicals, scaler


def run_campaign(
    dataset: TargetDataset,
    config: CampaignConfig,
    vocab: FragmentVocabulary | None = None,
    state_dir: str | Path | None = None,
    resume: bool = False,
    ensemble: EnsemblePredictor | None = None,
) -> tuple[list[IterationReport], Context]:
    """Run (or resume) a campaign; returns all reports and the final context.

    The ensemble is trained once on the experimental dataset. Generation
    leads rotate through the lead pool in order. The campaign stops early
    after early_stop_zero_rounds consecutive iterations accept nothing.
    """
    state_path = Path(state_dir) if state_dir is not None else None

    if resume:
        if state_path is None:
            raise ValidationError("resume needs a state directory")
        state = CampaignState.load(state_path)
        config = state.config
    else:
        state = CampaignState(
            config=config,
            context=init_context(dataset, min(config.initial_shots, len(dataset.records))),
            status="running",
        )
        if state_path is not None:
            state.save(state_path)

    vocab, ens, lead_set, train_canonicals, scaler = _campaign_assets(
        dataset, config, vocab, state_path, ensemble=ensemble
    )
    audit = AuditLog(state_path / "audit.jsonl") if state_path else None
    lead_strings = [to_canonical(m) for m in lead_set]

    zero_streak = 0
    for report in state.reports[-config.early_stop_zero_rounds:]:
        zero_streak = zero_streak + 1 if report.accepted == 0 else 0

    state.status = "running"
    start = state.completed_iterations
    for iteration in range(start, config.max_iterations):
        if zero_streak >= config.early_stop_zero_rounds:
            log.info("early stop: %d zero-acceptance iterations", zero_streak)
            break
        lead = lead_strings[iteration % len(lead_strings)]
        _, report = run_iteration(
            state.context, config, ens, vocab, lead,
            iteration=iteration + 1,
            train_canonicals=train_canonicals,
            lead_set=lead_set,
            scaler=scaler,
            audit=audit,
        )
        state.reports.append(report)
        state.completed_iterations = iteration + 1
        zero_streak = zero_streak + 1 if report.accepted == 0 else 0
        if state_path is not None:
            state.save(state_path)

    state.status = "finished"
    if state_path is not None:
        state.save(state_path)
    return state.reports, state.context
