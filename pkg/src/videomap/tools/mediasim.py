"""Hermetic media tool speaking the engine's media-executable protocol.

The engine shells out to whatever ``VIDEOMAP_MEDIA_BIN`` points at and only
reads raw buffers back. This tool implements the protocol over the synthetic
clip formats so the whole pipeline runs without ffmpeg or real footage:

    probe  <file>                     JSON metadata on stdout
    frames <file> --rate R            raw RGB24 frames at t = k/R, k while t < duration
    frame  <file> --at T              one raw RGB24 frame nearest to T
    render <cutlist.json> <out>       raw sequence traversing the cut list

Exit codes: 0 ok, 1 undecodable input / bad arguments.
"""

from __future__ import annotations

import argparse
import json
import sys

from videomap.tools import synthetic


def _open(path: str):
    try:
        return synthetic.open_clip(path)
    except (OSError, ValueError) as exc:
        print(f"mediasim: {exc}", file=sys.stderr)
        raise SystemExit(1)


def cmd_probe(args) -> None:
    clip = _open(args.file)
    info = clip.info
    sys.stdout.write(json.dumps({
        "duration_s": info.duration_s,
        "fps": info.fps,
        "width": info.width,
        "height": info.height,
    }, sort_keys=True))
    sys.stdout.write("\n")


def cmd_frames(args) -> None:
    clip = _open(args.file)
    rate = args.rate
    if rate <= 0:
        print("mediasim: --rate must be positive", file=sys.stderr)
        raise SystemExit(1)
    out = sys.stdout.buffer
    k = 0
    while k / rate < clip.info.duration_s:
        out.write(clip.frame_at_time(k / rate).tobytes())
        k += 1
    out.flush()


def cmd_frame(args) -> None:
    clip = _open(args.file)
    sys.stdout.buffer.write(clip.frame_at_time(args.at).tobytes())
    sys.stdout.buffer.flush()


def cmd_render(args) -> None:
    try:
        with open(args.cutlist, "r", encoding="utf-8") as fh:
            cutlist = json.load(fh)
        segments = cutlist["segments"]
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"mediasim: bad cut list: {exc}", file=sys.stderr)
        raise SystemExit(1)
    if not segments:
        print("mediasim: empty cut list", file=sys.stderr)
        raise SystemExit(1)

    sources = {seg["source_path"]: _open(seg["source_path"]) for seg in segments}
    fps_out = max(src.info.fps for src in sources.values())
    durations = [abs(seg["exit_time_s"] - seg["entry_time_s"]) for seg in segments]
    total = sum(durations)
    n_out = max(1, int(round(total * fps_out)))

    frames = []
    for j in range(n_out):
        tau = j / fps_out
        # locate segment on the concatenated timeline
        offset = 0.0
        seg = segments[-1]
        local = durations[-1]
        for s, dur in zip(segments, durations):
            if tau < offset + dur:
                seg, local = s, tau - offset
                break
            offset += dur
        else:
            local = durations[-1]
        if seg["direction"] == "reverse":
            t_src = seg["entry_time_s"] - local
        else:
            t_src = seg["entry_time_s"] + local
        frames.append(sources[seg["source_path"]].frame_at_time(t_src))

    synthetic.write_rawseq(args.out, frames, fps_out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="videomap-media-sim", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("probe")
    p.add_argument("file")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("frames")
    p.add_argument("file")
    p.add_argument("--rate", type=float, required=True)
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("frame")
    p.add_argument("file")
    p.add_argument("--at", type=float, required=True)
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("render")
    p.add_argument("cutlist")
    p.add_argument("out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
