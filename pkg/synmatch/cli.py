# coding: utf-8

"""
    SynMatch

    Command-line entry point: `synmatch <command> ...`.
"""  # noqa: E501

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from synmatch.configuration import Configuration
from synmatch.data.formats import load_manifest, save_manifest
from synmatch.data.split import build_split
from synmatch.data.synthetic import generate_synthetic_dataset
from synmatch.exceptions import SynMatchException
from synmatch.models.setting import Setting
from synmatch.models.split_tag import SplitTag
from synmatch.models.train_config import TrainConfig, parse_key_values
from synmatch import trainer

logger = logging.getLogger(__name__)


def _load_config(args: argparse.Namespace) -> TrainConfig:
    overrides: Dict[str, Any] = parse_key_values("\n".join(args.set or []))
    if getattr(args, "no_l_org", False):
        overrides["use_l_org"] = False
    if getattr(args, "no_l_syn", False):
        overrides["use_l_syn"] = False
    if getattr(args, "dump_synth", None):
        overrides["dump_synth_dir"] = args.dump_synth
    return TrainConfig.from_file(args.config, _flatten(overrides))


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            flat.update(_flatten(value, prefix + key + "."))
        else:
            flat[prefix + key] = value
    return flat


def cmd_gen_data(args: argparse.Namespace) -> int:
    manifest = generate_synthetic_dataset(args.out, n=args.n, size=args.size, classes=args.classes,
                                          seed=args.seed, channels=args.channels,
                                          ignore_index=Configuration.get_default().ignore_index)
    print("wrote {0} samples to {1}".format(len(manifest.samples), args.out))
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    manifest = build_split(load_manifest(args.data), Setting(args.setting), args.fraction, args.seed)
    save_manifest(manifest, args.data)
    split = manifest.split
    print("{0}: {1} labeled, {2} unlabeled, {3} val, {4} test".format(
        args.setting, len(split.labeled), len(split.unlabeled), len(split.val), len(split.test)))
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    result = trainer.train(_load_config(args), resume=args.resume)
    print("best epoch {0}: val mean dsc {1:.4f} ({2})".format(
        result.best_epoch, result.best_mean_dsc, result.best_checkpoint or result.last_checkpoint))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    rows = trainer.evaluate(args.ckpt, load_manifest(args.data), SplitTag(args.split),
                            out_csv=args.out, dump_dir=args.dump)
    print("{0}: mean dsc {1:.4f}, mean asd {2:.3f}".format(args.split, rows[-1].mean_dsc, rows[-1].mean_asd))
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    for row in trainer.ablate(_load_config(args)):
        print("{0:12s} dsc {1:.4f} asd {2:.3f}".format(row.run, row.mean_dsc, row.mean_asd))
    return 0


def cmd_consistency(args: argparse.Namespace) -> int:
    rows = trainer.consistency_track(_load_config(args))
    print("wrote {0} consistency rows".format(len(rows)))
    return 0


def cmd_fusion(args: argparse.Namespace) -> int:
    for row in trainer.fusion_study(_load_config(args)):
        print("{0:8s} dsc {1:.4f} asd {2:.3f}".format(row.fusion.value, row.mean_dsc, row.mean_asd))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synmatch", description="Semi-, weakly- and barely-supervised segmentation with feature-synthesized images.")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: $SYNMATCH_THREADS or 1)")
    parser.add_argument("--debug", action="store_true")
    parser.add_argument("--log-file", default=None)
    parser.add_argument("--progress", action="store_true", help="show a progress bar while training")
    parser.add_argument("--ignore-index", type=int, default=255, help="label value of unannotated scribble pixels")
    parser.add_argument("--non-deterministic", action="store_true", help="draw a fresh run seed instead of the configured one")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate the synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=250)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--channels", type=int, default=1, choices=[1, 3])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("split", help="assign labeled/unlabeled/val/test roles")
    p.add_argument("--data", required=True)
    p.add_argument("--setting", required=True, choices=[s.value for s in Setting])
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_split)

    def with_config(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="JSON or key=value file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
        p.add_argument("--no-l-org", action="store_true")
        p.add_argument("--no-l-syn", action="store_true")
        p.add_argument("--dump-synth", default=None, metavar="DIR")

    p = sub.add_parser("train", help="train one model")
    with_config(p)
    p.add_argument("--resume", default=None, metavar="CKPT")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", default="test", choices=[s.value for s in SplitTag])
    p.add_argument("--out", default=None, help="metrics CSV path")
    p.add_argument("--dump", default=None, metavar="DIR", help="write predicted label maps here")
    p.set_defaults(func=cmd_eval)

    for name, func, text in (("ablate", cmd_ablate, "run the L_org x L_syn grid"),
                             ("consistency", cmd_consistency, "track semantic consistency per epoch"),
                             ("fusion", cmd_fusion, "compare texture, shape and weighted synthesis")):
        p = sub.add_parser(name, help=text)
        with_config(p)
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configuration = Configuration(threads=args.threads, deterministic=not args.non_deterministic,
                                      progress=args.progress, ignore_index=args.ignore_index, debug=args.debug)
    except SynMatchException as exc:
        print("synmatch: error: {0}".format(exc), file=sys.stderr)
        return 2
    configuration.enable_console_logging(logging.DEBUG if args.debug else logging.INFO)
    if args.log_file:
        configuration.logger_file = args.log_file
    Configuration.set_default(configuration)
    try:
        return args.func(args)
    except SynMatchException as exc:
        logger.debug("command failed", exc_info=True)
        print("synmatch {0}: error: {1}".format(args.command, exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
