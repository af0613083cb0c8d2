"""Command-line front end.

    prompt-relay curves --L 8 [--epsilon E] [--window W | --sweep-w | --sweep-eps]
    prompt-relay validate SCHEDULE
    prompt-relay penalty SCHEDULE [flags]
    prompt-relay occupancy SCHEDULE [flags]
    prompt-relay compare SCHEDULE [flags]

Exit codes: 0 success, 1 internal invariant failure, 2 user error. Data goes
to stdout or ``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from .errors import InvariantError, RelayError
from .occupancy import RANDOM, UNIFORM, boundary_report, occupancy
from .penalty import AUTO, DEFAULT_EPSILON, Mode, PenaltyConfig, build_penalty_matrix, decay_curve
from .timeline import GLOBAL, build_token_layout, load_schedule

CURVE_STEP_DENOM = 20  # grid step 0.05 latent frames
SWEEP_EPSILONS = (0.3, 0.1, 0.01)


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def curve_offsets(half_length: float) -> np.ndarray:
    """Offsets k/20 covering [-1.5L, 1.5L]; anchored at 0 so 0 and +-L land exactly."""
    k_max = math.floor(1.5 * half_length * CURVE_STEP_DENOM + 1e-9)
    k = np.arange(-k_max, k_max + 1)
    return k / CURVE_STEP_DENOM


def _write_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# argparse type helpers: raising ArgumentTypeError gives exit 2 naming the flag


def _epsilon(text):
    try:
        e = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < e < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return e


def _window(text):
    if text.lower() == AUTO:
        return AUTO
    try:
        w = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None
    if not math.isfinite(w) or w < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return w


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x) or x <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return x


def _count(minimum):
    def parse(text):
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {n}")
        return n

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prompt-relay", description="Temporal cross-attention routing")
    sub = parser.add_subparsers(dest="command", required=True)

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", type=Path, help="write data here instead of stdout")

    penalty = argparse.ArgumentParser(add_help=False)
    penalty.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON)
    penalty.add_argument("--window", type=_window, default=AUTO, help="'auto' (w = L - 2) or frames")

    curves = sub.add_parser("curves", parents=[out, penalty], help="retained-fraction curves")
    curves.add_argument("--L", dest="half_length", type=_positive_float, required=True)
    sweep = curves.add_mutually_exclusive_group()
    sweep.add_argument("--sweep-w", action="store_true", help="w in {0, L/2, L-2}")
    sweep.add_argument("--sweep-eps", action="store_true", help="epsilon in {0.3, 0.1, 0.01}")

    validate = sub.add_parser("validate", help="check a schedule file")
    validate.add_argument("schedule", type=Path)

    run = argparse.ArgumentParser(add_help=False, parents=[out, penalty])
    run.add_argument("schedule", type=Path)
    run.add_argument("--mode", type=str.lower, choices=[m.value for m in Mode], default=Mode.SOFT.value)
    run.add_argument("--tokens-per-frame", type=_count(1), default=4)
    run.add_argument("--tokens-per-prompt", type=_count(1), default=8)
    run.add_argument("--global-tokens", type=_count(0), default=0)
    run.add_argument("--seed", type=_count(0), default=0)
    run.add_argument("--profile", type=str.lower, choices=[UNIFORM, RANDOM], default=UNIFORM)

    sub.add_parser("penalty", parents=[run], help="penalty matrix as CSV")
    sub.add_parser("occupancy", parents=[run], help="per-frame occupancy as CSV")
    sub.add_parser("compare", parents=[run], help="soft vs hard boundary smoothness")
    return parser


def cmd_curves(args) -> str:
    L = args.half_length
    if args.sweep_w:
        if args.window != AUTO:
            raise UsageError("--window cannot be combined with --sweep-w")
        windows = list(dict.fromkeys([0.0, L / 2, max(L - 2, 0.0)]))
        settings = [(f"w={fmt(w)}", w, args.epsilon) for w in windows]
    else:
        w = max(L - 2, 0.0) if args.window == AUTO else args.window
        if args.sweep_eps:
            settings = [(f"eps={fmt(e)}", w, e) for e in SWEEP_EPSILONS]
        else:
            settings = [("retained_fraction", w, args.epsilon)]
    for _, w, _ in settings:
        if w >= L:
            raise UsageError(f"--window: degenerate window, w={fmt(w)} must be < L={fmt(L)}")

    offsets = curve_offsets(L)
    columns = [decay_curve(L, w, e, offsets).retained_fraction for _, w, e in settings]
    header = ["offset"] + [label for label, _, _ in settings]
    rows = ([fmt(o)] + [fmt(c[k]) for c in columns] for k, o in enumerate(offsets))
    return _write_csv(header, rows)


def cmd_validate(args) -> str:
    schedule = load_schedule(args.schedule)
    lines = [f"video_frames {schedule.video_frames}"]
    for s in schedule.segments:
        lines.append(
            f"segment {s.segment_id} prompt={s.prompt_id} start={s.start_frame} end={s.end_frame} "
            f"m={fmt(s.midpoint)} L={fmt(s.half_length)}"
        )
    if schedule.global_prompt_id is not None:
        lines.append(f"global prompt={schedule.global_prompt_id}")
    return "\n".join(lines) + "\n"


def _setup(args, mode=None):
    schedule = load_schedule(args.schedule)
    layout = build_token_layout(
        schedule, args.tokens_per_frame, args.tokens_per_prompt, args.global_tokens
    )
    config = PenaltyConfig(args.epsilon, args.window, mode or args.mode)
    return schedule, layout, config


def cmd_penalty(args) -> str:
    schedule, layout, config = _setup(args)
    matrix = build_penalty_matrix(schedule, layout, config)
    labels = {s.segment_id: s.prompt_id for s in schedule.segments}
    labels[GLOBAL] = schedule.global_prompt_id
    seen: dict[int, int] = {}
    key_names = []
    for owner in layout.key_owner.tolist():
        t = seen.get(owner, 0)
        seen[owner] = t + 1
        key_names.append(f"{labels[owner]}:{t}")
    rows = (
        [str(i), str(int(f))] + [fmt(c) for c in row]
        for i, (f, row) in enumerate(zip(layout.query_frame, matrix.values))
    )
    return _write_csv(["query", "frame"] + key_names, rows)


def cmd_occupancy(args) -> str:
    schedule, layout, config = _setup(args)
    trace = occupancy(schedule, layout, config, args.profile, args.seed)
    rows = ([str(f)] + [fmt(x) for x in row] for f, row in enumerate(trace.mass))
    return _write_csv(["frame"] + list(trace.prompts), rows)


def cmd_compare(args) -> str:
    reports = {}
    for mode in (Mode.SOFT, Mode.HARD):
        schedule, layout, config = _setup(args, mode)
        trace = occupancy(schedule, layout, config, args.profile, args.seed)
        reports[mode] = boundary_report(trace, schedule)
    soft, hard = reports[Mode.SOFT], reports[Mode.HARD]
    lines = [
        f"schedule {args.schedule.name}: {len(schedule.segments)} segments, {schedule.video_frames} frames",
        f"epsilon={fmt(args.epsilon)} window={args.window} profile={args.profile}",
    ]
    for mode, rep in reports.items():
        steps = " ".join(fmt(s) for s in rep.per_boundary_steps) or "-"
        lines.append(f"{mode.name} max_step={fmt(rep.max_step)} boundary_steps={steps}")
    if soft.max_step < hard.max_step:
        lines.append("SOFT max_step < HARD max_step: SOFT is smoother")
    elif soft.max_step > hard.max_step:
        lines.append("SOFT max_step > HARD max_step: HARD is smoother")
    else:
        lines.append("SOFT max_step == HARD max_step: no difference")
    return "\n".join(lines) + "\n"


COMMANDS = {
    "curves": cmd_curves,
    "validate": cmd_validate,
    "penalty": cmd_penalty,
    "occupancy": cmd_occupancy,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except (UsageError, RelayError, OSError) as exc:
        print(f"prompt-relay {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"prompt-relay {args.command}: internal error: {exc}", file=sys.stderr)
        return 1
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
