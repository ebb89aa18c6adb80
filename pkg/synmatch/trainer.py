# coding: utf-8

"""
    SynMatch

    Training loop across the SSL, WSL and BSL regimes, evaluation of saved
    checkpoints, and the ablation, fusion and consistency studies.

    Each iteration samples a labeled and an unlabeled batch, pseudo-labels
    the weak unlabeled views without recording, synthesizes one image per
    unlabeled item from the taps of that same pass, forwards the strong
    labeled views, the (mixed) strong unlabeled views and the synthesized
    images, and takes one AdamW step on L = L_s + L_org + L_syn.
"""  # noqa: E501

from __future__ import annotations

import csv
import logging
import math
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from synmatch.augment import apply_mix, apply_to_label, mix_batch
from synmatch.configuration import Configuration
from synmatch.data.checkpoint import CheckpointInfo, load_checkpoint, load_model, save_checkpoint
from synmatch.data.formats import load_manifest, write_image, write_label
from synmatch.data.loader import (
    BATCH_STREAM, LABELED_AUG_STREAM, MEASURE_STREAM, MIX_STREAM, SYNTHESIS_STREAM, UNLABELED_AUG_STREAM,
    SampleStore, prepare_views, sample_batch, stream_rng,
)
from synmatch.exceptions import ConfigError
from synmatch.losses import pseudo_label_with_taps, supervised_loss, total_loss, unsup_loss
from synmatch.metrics import aggregate_row, consistency_report, predict, sample_row, score_batch
from synmatch.models.consistency_scores import ConsistencyScores
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.fusion_mode import FusionMode
from synmatch.models.loss_report import LossReport
from synmatch.models.metrics_row import MetricsRow
from synmatch.models.pseudo_label_batch import PseudoLabelBatch
from synmatch.models.split_tag import SplitTag
from synmatch.models.study_row import StudyRow
from synmatch.models.train_config import TrainConfig
from synmatch.models.train_result import TrainResult
from synmatch.optim import AdamW
from synmatch.synthesis import synthesize_batch
from synmatch.tensor import Tensor, backward
from synmatch.unet import init_model

logger = logging.getLogger(__name__)

STEPS_HEADER = ["epoch", "step", "l_s", "l_org", "l_syn", "l_total", "masked_fraction"]
CONSISTENCY_HEADER = ["epoch", "mode", "dice_syn_pseudo", "dice_pseudo_gt"]

BEST_CHECKPOINT = "best.ckpt"
LAST_CHECKPOINT = "last.ckpt"


class CsvLog:
    """Append-only CSV file with a fixed header."""

    def __init__(self, path: str, header: Sequence[str], append: bool = False) -> None:
        self.path = path
        self.header = list(header)
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        if not append or not os.path.exists(path):
            with open(path, "w", newline="", encoding="utf-8") as handle:
                csv.DictWriter(handle, fieldnames=self.header).writeheader()

    def write(self, row: Dict[str, Any]) -> None:
        with open(self.path, "a", newline="", encoding="utf-8") as handle:
            csv.DictWriter(handle, fieldnames=self.header).writerow(row)

    def write_all(self, rows: Iterable[Dict[str, Any]]) -> None:
        for row in rows:
            self.write(row)


def check_compatible(config: TrainConfig, manifest: DatasetManifest) -> None:
    """Raise ConfigError when the experiment cannot run on this split."""
    if manifest.setting is None:
        raise ConfigError("the dataset has no split yet, run `synmatch split` first", ["data_dir"])
    if manifest.setting != config.setting:
        raise ConfigError("config setting {0} does not match the split ({1})".format(
            config.setting.value, manifest.setting.value), ["setting"])
    if manifest.labeled_fraction is not None and abs(manifest.labeled_fraction - config.labeled_fraction) > 1e-9:
        raise ConfigError("config labeled_fraction {0} does not match the split ({1})".format(
            config.labeled_fraction, manifest.labeled_fraction), ["labeled_fraction"])
    if manifest.num_classes != config.model.num_classes:
        raise ConfigError("model has {0} classes, dataset has {1}".format(
            config.model.num_classes, manifest.num_classes), ["model", "num_classes"])
    if manifest.in_channels != config.model.in_channels:
        raise ConfigError("model expects {0} channels, dataset has {1}".format(
            config.model.in_channels, manifest.in_channels), ["model", "in_channels"])
    if manifest.image_size != config.image_size:
        raise ConfigError("image_size {0} differs from the dataset ({1})".format(
            config.image_size, manifest.image_size), ["image_size"])
    if not manifest.split.labeled:
        raise ConfigError("the split has no labeled samples", ["data_dir"])
    if not manifest.split.val:
        raise ConfigError("the split has no validation samples", ["data_dir"])


class Trainer:
    """Owns the model, the optimizer and the CSV logs of one run."""

    def __init__(
        self,
        config: TrainConfig,
        manifest: Optional[DatasetManifest] = None,
        configuration: Optional[Configuration] = None,
    ) -> None:
        self.config = config
        self.configuration = configuration or Configuration.get_default()
        self.manifest = manifest if manifest is not None else load_manifest(config.data_dir)
        check_compatible(config, self.manifest)
        if self.manifest.ignore_index != self.configuration.ignore_index:
            raise ConfigError("dataset scribbles use ignore index {0}, configuration has {1}".format(
                self.manifest.ignore_index, self.configuration.ignore_index), ["ignore_index"])
        if self.configuration.deterministic:
            self.seed = config.seed
        else:
            self.seed = int(np.random.SeedSequence().entropy)
            logger.info("non-deterministic run, drew seed %d", self.seed)
        self.store = SampleStore(self.manifest)
        self.model = init_model(config.model, config.model_seed)
        self.optimizer = AdamW(dict(self.model.parameters()), lr=config.lr, betas=tuple(config.betas),
                               weight_decay=config.weight_decay)

        self.labeled_ids = list(self.manifest.split.labeled)
        kinds = {self.store.index[i].label_kind for i in self.labeled_ids}
        self.labeled_kind = kinds.pop()
        self.unlabeled_ids = [s.id for s in self.manifest.unlabeled_pool()]
        self.unsupervised = (config.use_l_org or config.use_l_syn) and bool(self.unlabeled_ids)

        self.epoch = 0
        self.global_step = 0
        self.best_epoch = 0
        self.best_mean_dsc = -1.0
        self.history: List[MetricsRow] = []
        self.consistency: List[ConsistencyScores] = []

    # -- schedule ---------------------------------------------------------
    @property
    def iterations_per_epoch(self) -> int:
        if self.config.iterations_per_epoch is not None:
            return self.config.iterations_per_epoch
        count = math.ceil(len(self.labeled_ids) / self.config.labeled_batch_size)
        if self.unsupervised:
            count = max(count, math.ceil(len(self.unlabeled_ids) / self.config.unlabeled_batch_size))
        return max(1, count)

    # -- one iteration ----------------------------------------------------
    def run_step(self, epoch: int, step: int) -> LossReport:
        """One optimizer step; all randomness is keyed by (seed, epoch, step)."""
        cfg = self.config
        seed = self.seed
        threads = self.configuration.threads
        ignore_index = self.configuration.ignore_index
        rng = stream_rng(seed, epoch, step, BATCH_STREAM)

        lab_ids = [self.labeled_ids[i] for i in sample_batch(rng, len(self.labeled_ids), cfg.labeled_batch_size)]
        views_l = prepare_views(self.store.images(lab_ids), seed, epoch, step, LABELED_AUG_STREAM,
                                cfg.augmentation, threads)
        y_l = np.stack([apply_to_label(r, y) for r, y in zip(views_l.strong_records, self.store.labels(lab_ids))])

        self.optimizer.zero_grad()
        l_s = supervised_loss(self.model.forward(Tensor(views_l.strong)), y_l, self.labeled_kind, ignore_index)

        l_org = l_syn = None
        masked_fraction = 0.0
        if self.unsupervised:
            unl_ids = [self.unlabeled_ids[i] for i in sample_batch(rng, len(self.unlabeled_ids), cfg.unlabeled_batch_size)]
            views_u = prepare_views(self.store.images(unl_ids), seed, epoch, step, UNLABELED_AUG_STREAM,
                                    cfg.augmentation, threads)
            plb, taps = pseudo_label_with_taps(self.model, views_u.weak)
            masked_fraction = plb.masked_fraction(cfg.tau)

            strong_logits = synth_logits = None
            strong_targets: Optional[PseudoLabelBatch] = None
            if cfg.use_l_org:
                mixed, records = mix_batch(views_u.strong, views_u.strong_records,
                                           stream_rng(seed, epoch, step, MIX_STREAM), cfg.augmentation)
                strong_targets = PseudoLabelBatch(labels=apply_mix(np.asarray(plb.labels), records),
                                                  confidence=apply_mix(np.asarray(plb.confidence), records))
                strong_logits = self.model.forward(Tensor(mixed))
            if cfg.use_l_syn:
                synth = synthesize_batch(taps, stream_rng(seed, epoch, step, SYNTHESIS_STREAM), cfg.fusion,
                                         original=views_u.weak)
                synth_logits = self.model.forward(synth.image)
                if cfg.dump_synth_dir and step == 0:
                    dump_triplets(os.path.join(cfg.dump_synth_dir, "epoch_{0:03d}".format(epoch)),
                                  unl_ids, views_u.weak, synth.image.data, np.asarray(plb.labels))
            l_org, l_syn = unsup_loss(strong_logits, synth_logits, plb, cfg.tau, strong_targets)

        report = total_loss(l_s, l_org, l_syn, masked_fraction)
        backward(report.total)
        self.optimizer.step()
        self.global_step += 1
        logger.debug("epoch %d step %d: %s", epoch, step, report.to_dict())
        return report

    # -- evaluation -------------------------------------------------------
    def validate(self, epoch: int) -> MetricsRow:
        ids = self.manifest.split.val
        preds = predict(self.model, self.store.images(ids))
        scores = score_batch(preds, self.store.ground_truths(ids), self.manifest.num_classes, self.configuration.threads)
        consistency = None
        if self.config.track_consistency:
            consistency = self.measure_consistency(epoch)
            self.consistency.append(consistency)
        return aggregate_row(epoch, SplitTag.VAL, scores, consistency)

    def measure_consistency(self, epoch: int) -> ConsistencyScores:
        ids = self.unlabeled_ids or self.labeled_ids
        return consistency_report(self.model, self.store.images(ids), self.store.ground_truths(ids),
                                  stream_rng(self.seed, epoch, 0, MEASURE_STREAM), self.config.fusion)

    # -- loop -------------------------------------------------------------
    def resume(self, path: str) -> None:
        info = load_checkpoint(path, self.model, self.optimizer)
        self.epoch = info.epoch
        self.global_step = info.step
        self.best_epoch = info.best_epoch
        self.best_mean_dsc = info.best_mean_dsc if info.best_epoch else -1.0
        logger.info("resumed from %s after epoch %d (step %d)", path, self.epoch, self.global_step)

    def _info(self) -> CheckpointInfo:
        return CheckpointInfo(epoch=self.epoch, step=self.global_step, best_epoch=self.best_epoch,
                              best_mean_dsc=max(0.0, self.best_mean_dsc))

    def train(self, resume: Optional[str] = None) -> TrainResult:
        cfg = self.config
        if resume:
            self.resume(resume)
        out_dir = cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        append = resume is not None
        steps_log = CsvLog(os.path.join(out_dir, "steps.csv"), STEPS_HEADER, append)
        metrics_log = CsvLog(os.path.join(out_dir, "metrics.csv"), MetricsRow.csv_header(self.manifest.num_classes), append)
        best_path = os.path.join(out_dir, BEST_CHECKPOINT)
        last_path = os.path.join(out_dir, LAST_CHECKPOINT)
        logger.info("training %s (%s, fraction %.3f) for %d epochs x %d iterations, %d parameters",
                    cfg.mode_name, cfg.setting.value, cfg.labeled_fraction, cfg.epochs,
                    self.iterations_per_epoch, self.model.num_parameters())

        for epoch in range(self.epoch + 1, cfg.epochs + 1):
            reports = []
            for step in tqdm(range(self.iterations_per_epoch), desc="epoch {0}".format(epoch),
                             disable=not self.configuration.progress, leave=False):
                report = self.run_step(epoch, step)
                reports.append(report)
                steps_log.write({
                    "epoch": epoch, "step": step,
                    "l_s": "{0:.6f}".format(report.l_s), "l_org": "{0:.6f}".format(report.l_org),
                    "l_syn": "{0:.6f}".format(report.l_syn), "l_total": "{0:.6f}".format(report.l_total),
                    "masked_fraction": "{0:.6f}".format(report.masked_fraction),
                })
            self.epoch = epoch
            row = self.validate(epoch)
            self.history.append(row)
            metrics_log.write(row.to_csv_row())
            if row.mean_dsc > self.best_mean_dsc:
                self.best_epoch = epoch
                self.best_mean_dsc = row.mean_dsc
                save_checkpoint(best_path, self.model, self.optimizer, self._info())
            save_checkpoint(last_path, self.model, self.optimizer, self._info())
            logger.info("epoch %d: loss %.4f (s %.4f, org %.4f, syn %.4f), masked %.3f, val dsc %.4f asd %.3f",
                        epoch, float(np.mean([r.l_total for r in reports])), float(np.mean([r.l_s for r in reports])),
                        float(np.mean([r.l_org for r in reports])), float(np.mean([r.l_syn for r in reports])),
                        float(np.mean([r.masked_fraction for r in reports])), row.mean_dsc, row.mean_asd)

        return TrainResult(
            out_dir=out_dir,
            best_checkpoint=best_path if os.path.exists(best_path) else None,
            last_checkpoint=last_path,
            best_epoch=self.best_epoch,
            best_mean_dsc=max(0.0, self.best_mean_dsc),
            history=self.history,
        )


def dump_triplets(directory: str, ids: Sequence[str], images: np.ndarray, synth: np.ndarray, pseudo: np.ndarray) -> None:
    """Write <id>_image, <id>_synth and <id>_pseudo files for visual inspection."""
    os.makedirs(directory, exist_ok=True)
    suffix = ".ppm" if images.shape[1] == 3 else ".pgm"
    for k, sample_id in enumerate(ids):
        write_image(os.path.join(directory, "{0}_image{1}".format(sample_id, suffix)), images[k])
        write_image(os.path.join(directory, "{0}_synth{1}".format(sample_id, suffix)), synth[k])
        write_label(os.path.join(directory, "{0}_pseudo.pgm".format(sample_id)), pseudo[k])


def train(
    config: TrainConfig,
    manifest: Optional[DatasetManifest] = None,
    resume: Optional[str] = None,
    configuration: Optional[Configuration] = None,
) -> TrainResult:
    return Trainer(config, manifest, configuration).train(resume=resume)


def evaluate(
    checkpoint: str,
    manifest: DatasetManifest,
    split: SplitTag = SplitTag.TEST,
    out_csv: Optional[str] = None,
    dump_dir: Optional[str] = None,
    epoch: int = 0,
    configuration: Optional[Configuration] = None,
) -> List[MetricsRow]:
    """Per-sample rows followed by one aggregate row, at the dataset resolution."""
    configuration = configuration or Configuration.get_default()
    split = SplitTag(split)
    model = load_model(checkpoint)
    if model.config.num_classes != manifest.num_classes or model.config.in_channels != manifest.in_channels:
        raise ConfigError("checkpoint model ({0} classes, {1} channels) does not fit the dataset ({2}, {3})".format(
            model.config.num_classes, model.config.in_channels, manifest.num_classes, manifest.in_channels),
            ["checkpoint"])
    model.config.check_input(manifest.image_size, manifest.image_size)
    ids = list(getattr(manifest.split, split.value))
    store = SampleStore(manifest)
    preds = predict(model, store.images(ids)) if ids else np.zeros((0, manifest.image_size, manifest.image_size), dtype=np.int64)
    scores = score_batch(preds, store.ground_truths(ids), manifest.num_classes, configuration.threads) if ids else []
    rows = [sample_row(epoch, split, i, s) for i, s in zip(ids, scores)]
    rows.append(aggregate_row(epoch, split, scores))
    if dump_dir:
        os.makedirs(dump_dir, exist_ok=True)
        for sample_id, pred in zip(ids, preds):
            write_label(os.path.join(dump_dir, "{0}_pred.pgm".format(sample_id)), pred)
    if out_csv:
        log = CsvLog(out_csv, MetricsRow.csv_header(manifest.num_classes))
        log.write_all(r.to_csv_row() for r in rows)
    logger.info("%s on %s: mean dsc %.4f, mean asd %.3f over %d samples", checkpoint, split.value,
                rows[-1].mean_dsc, rows[-1].mean_asd, len(ids))
    return rows


ABLATION_RUNS = (
    ("baseline", False, False),
    ("l_org", True, False),
    ("l_syn", False, True),
    ("l_org_l_syn", True, True),
)


def _study_run(name: str, config: TrainConfig, manifest: DatasetManifest, configuration: Optional[Configuration]) -> StudyRow:
    result = train(config, manifest, configuration=configuration)
    checkpoint = result.best_checkpoint or result.last_checkpoint
    aggregate = evaluate(checkpoint, manifest, SplitTag.TEST,
                         out_csv=os.path.join(config.out_dir, "test_metrics.csv"),
                         dump_dir=os.path.join(config.out_dir, "predictions") if config.dump_predictions else None,
                         epoch=result.best_epoch, configuration=configuration)[-1]
    return StudyRow(run=name, use_l_org=config.use_l_org, use_l_syn=config.use_l_syn, fusion=config.fusion,
                    mean_dsc=aggregate.mean_dsc, mean_asd=aggregate.mean_asd,
                    split_ids_hash=manifest.split.ids_hash())


def ablate(
    config: TrainConfig,
    manifest: Optional[DatasetManifest] = None,
    configuration: Optional[Configuration] = None,
) -> List[StudyRow]:
    """The 2x2 grid over the L_org / L_syn switches with shared seeds and split."""
    manifest = manifest if manifest is not None else load_manifest(config.data_dir)
    rows = []
    for name, use_l_org, use_l_syn in ABLATION_RUNS:
        run_config = config.with_overrides(out_dir=os.path.join(config.out_dir, name),
                                           use_l_org=use_l_org, use_l_syn=use_l_syn)
        rows.append(_study_run(name, run_config, manifest, configuration))
    CsvLog(os.path.join(config.out_dir, "ablation.csv"), StudyRow.ABLATION_HEADER).write_all(
        r.to_ablation_row() for r in rows)
    return rows


def fusion_study(
    config: TrainConfig,
    manifest: Optional[DatasetManifest] = None,
    configuration: Optional[Configuration] = None,
) -> List[StudyRow]:
    """Texture-only, shape-only and weighted synthesis with shared seeds and split."""
    manifest = manifest if manifest is not None else load_manifest(config.data_dir)
    rows = []
    for fusion in (FusionMode.TEXTURE, FusionMode.SHAPE, FusionMode.WEIGHTED):
        run_config = config.with_overrides(out_dir=os.path.join(config.out_dir, "fusion_" + fusion.value),
                                           fusion=fusion.value, use_l_syn=True)
        rows.append(_study_run(fusion.value, run_config, manifest, configuration))
    CsvLog(os.path.join(config.out_dir, "fusion.csv"), StudyRow.FUSION_HEADER).write_all(
        r.to_fusion_row() for r in rows)
    return rows


def consistency_track(
    config: TrainConfig,
    manifest: Optional[DatasetManifest] = None,
    configuration: Optional[Configuration] = None,
) -> List[Dict[str, Any]]:
    """Per-epoch consistency of a SynMatch-mode and a FixMatch-mode run."""
    manifest = manifest if manifest is not None else load_manifest(config.data_dir)
    rows: List[Dict[str, Any]] = []
    for mode, use_l_syn in (("synmatch", True), ("fixmatch", False)):
        run_config = config.with_overrides(out_dir=os.path.join(config.out_dir, mode), use_l_org=True,
                                           use_l_syn=use_l_syn, track_consistency=True)
        trainer = Trainer(run_config, manifest, configuration)
        trainer.train()
        for row in trainer.history:
            rows.append({
                "epoch": row.epoch,
                "mode": mode,
                "dice_syn_pseudo": "{0:.6f}".format(row.dice_syn_pseudo or 0.0),
                "dice_pseudo_gt": "{0:.6f}".format(row.dice_pseudo_gt or 0.0),
            })
    CsvLog(os.path.join(config.out_dir, "consistency.csv"), CONSISTENCY_HEADER).write_all(rows)
    return rows
