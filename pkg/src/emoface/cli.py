"""Operator command line: dataset prep, training, evaluation, inference,
and the HTTP service.

Exit codes: 0 success, 1 usage error, 2 runtime error (printed as the
error class name plus message).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import EmofaceError


class _Parser(argparse.ArgumentParser):
    """argparse with the documented exit-code contract (usage errors -> 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emoface", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prep-dataset", help="detect, crop, and equalize raw images")
    p.add_argument("--raw-dir", required=True, help="folder with per-domain subfolders")
    p.add_argument("--out-dir", required=True, help="output dataset folder")
    p.add_argument("--cascade", required=True, help="stump-stage cascade XML")
    p.add_argument("--size", type=int, default=128, help="output face size")

    p = sub.add_parser("train-emotion", help="train the text emotion classifier")
    p.add_argument("--corpus", required=True, help="label,text CSV")
    p.add_argument("--glove", required=True, help="word vector text file")
    p.add_argument("--out", required=True, help="output model path")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--max-len", type=int, default=64)
    p.add_argument("--cell", choices=["lstm", "rnn"], default="lstm")

    p = sub.add_parser("eval-emotion", help="evaluate a trained classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=0, help="train/test split seed")

    p = sub.add_parser("train-gan", help="train the expression synthesizer")
    p.add_argument("--dataset", required=True, help="prepared <dir>/<domain>/*.png tree")
    p.add_argument("--out", required=True, help="output checkpoint path")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--img-size", type=int, default=128)
    p.add_argument("--base-channels", type=int, default=64)
    p.add_argument("--res-blocks", type=int, default=6)
    p.add_argument("--d-layers", type=int, default=4)
    p.add_argument("--edge-kernel", type=int, default=7)
    p.add_argument("--lambda-cls", type=float, default=1.0)
    p.add_argument("--lambda-rec", type=float, default=10.0)
    p.add_argument("--metrics", help="write newline-delimited JSON metrics here")

    p = sub.add_parser("infer", help="run the full text-to-expression pipeline")
    p.add_argument("--photo", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--emotion-model", required=True)
    p.add_argument("--gan-ckpt", required=True)
    p.add_argument("--out", default="out.png")
    p.add_argument("--emit-grid", action="store_true",
                   help="also write an input + all-domains strip")

    p = sub.add_parser("serve", help="run the blog service")
    p.add_argument("--config", help="TOML config path")
    return parser


def _cmd_prep_dataset(args) -> int:
    from .faceprep import build_dataset, load_cascade

    cascade = load_cascade(args.cascade)
    manifest = build_dataset(args.raw_dir, cascade, args.out_dir, size=args.size)
    for domain, count in sorted(manifest.domains.items()):
        print(f"{domain}: {count}")
    print(f"total={manifest.total} skipped={len(manifest.skips)}")
    return 0


def _cmd_train_emotion(args) -> int:
    from .classifier import TrainConfig, load_corpus_csv, save_model, train
    from .embeddings import load_vectors

    corpus = load_corpus_csv(args.corpus, seed=args.seed)
    store = load_vectors(args.glove)
    cfg = TrainConfig(
        epochs=args.epochs,
        hidden_dim=args.hidden,
        seed=args.seed,
        batch_size=args.batch,
        learning_rate=args.lr,
        max_len=args.max_len,
        cell=args.cell,
    )
    model = train(corpus, store, cfg)
    save_model(model, args.out)
    meta = model.train_meta
    print(
        f"saved {args.out}: train_acc={meta['train_accuracy']:.4f} "
        f"test_acc={meta['test_accuracy']:.4f}"
    )
    return 0


def _cmd_eval_emotion(args) -> int:
    from .classifier import evaluate, load_corpus_csv, load_model

    corpus = load_corpus_csv(args.corpus, seed=args.seed)
    model = load_model(args.model)
    train_acc = evaluate(model, corpus.train_items)
    test_acc = evaluate(model, corpus.test_items) if corpus.test_idx else float("nan")
    cell = model.train_meta.get("cell", "lstm").upper()
    name = f"{cell} + {args.corpus}"
    print(f"{'Model+Dataset':<40} {'Train Acc.':>10} {'Test Acc.':>10}")
    print(f"{name:<40} {train_acc:>9.1%} {test_acc:>9.1%}")
    print(f"train_acc={train_acc:.4f}, test_acc={test_acc:.4f}")
    return 0


def _cmd_train_gan(args) -> int:
    from .gan import GanConfig, JsonlSink, init_state, save_checkpoint, train_loop
    from .gan.train import load_dataset_folder

    images, labels = load_dataset_folder(args.dataset)
    if images.shape[1] != args.img_size or images.shape[2] != args.img_size:
        raise EmofaceError(
            f"dataset images are {images.shape[1]}x{images.shape[2]}, "
            f"expected --img-size {args.img_size}"
        )
    cfg = GanConfig(
        img_size=args.img_size,
        base_channels=args.base_channels,
        n_res_blocks=args.res_blocks,
        d_layers=args.d_layers,
        edge_kernel=args.edge_kernel,
        lambda_cls=args.lambda_cls,
        lambda_rec=args.lambda_rec,
        learning_rate=args.lr,
        batch_size=args.batch,
        seed=args.seed,
    )
    state = init_state(cfg)
    sink = JsonlSink(args.metrics) if args.metrics else None
    history = train_loop(state, images, labels, steps=args.steps, sink=sink)
    if sink:
        sink.close()
    save_checkpoint(state, args.out)
    last = history[-1] if history else {}
    print(
        f"saved {args.out}: steps={state.step} "
        + " ".join(f"{k}={v:.4f}" for k, v in last.items() if k != "step")
    )
    return 0


def _cmd_infer(args) -> int:
    from .classifier import load_model
    from .faceprep import load_image, save_png, default_cascade_path, load_cascade
    from .gan import load_checkpoint, synthesize
    from .labels import ExpressionDomain
    from .service.core import PipelineModels, transfer_emotion

    models = PipelineModels(
        classifier=load_model(args.emotion_model),
        gan=load_checkpoint(args.gan_ckpt),
        cascade=load_cascade(default_cascade_path()),
    )
    photo = load_image(args.photo)
    emotion, probs, synthesized, low_conf = transfer_emotion(args.text, photo, models)
    save_png(synthesized, args.out)
    flag = " (low confidence)" if low_conf else ""
    print(f"emotion={emotion.label_name}{flag} p={probs.max():.3f} wrote {args.out}")
    if args.emit_grid:
        from .faceprep.ops import prep_face

        prepped = prep_face(photo, models.cascade)
        tiles = [prepped] + [
            synthesize(models.gan, prepped, d) for d in ExpressionDomain
        ]
        grid = np.concatenate(tiles, axis=1)
        grid_path = str(args.out).rsplit(".", 1)[0] + "_grid.png"
        save_png(grid, grid_path)
        print(f"wrote {grid_path}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.config)
    return 0


_COMMANDS = {
    "prep-dataset": _cmd_prep_dataset,
    "train-emotion": _cmd_train_emotion,
    "eval-emotion": _cmd_eval_emotion,
    "train-gan": _cmd_train_gan,
    "infer": _cmd_infer,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except EmofaceError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
