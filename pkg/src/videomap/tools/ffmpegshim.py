"""Media-protocol shim backed by ffmpeg/ffprobe.

Translates the engine's media-executable protocol (probe/frames/frame/render)
into ffmpeg invocations so real footage works unchanged:

    VIDEOMAP_MEDIA_BIN=videomap-media-ffmpeg videomap ingest shoot/ --rate 1.0

ffprobe is resolved as a sibling of the configured ffmpeg binary (or from
PATH). Command construction lives in pure functions so it stays testable on
hosts without ffmpeg.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import subprocess
import sys


def ffmpeg_path() -> str:
    return os.environ.get("VIDEOMAP_FFMPEG", "ffmpeg")


def ffprobe_path() -> str:
    ff = ffmpeg_path()
    base = os.path.basename(ff)
    if "ffmpeg" in base:
        sibling = os.path.join(os.path.dirname(ff), base.replace("ffmpeg", "ffprobe"))
        if os.path.dirname(ff) == "" or os.path.exists(sibling):
            return sibling if os.path.dirname(ff) else "ffprobe"
    return "ffprobe"


def probe_cmd(path: str) -> list[str]:
    return [
        ffprobe_path(), "-v", "error",
        "-print_format", "json",
        "-show_format", "-show_streams",
        path,
    ]


def frames_cmd(path: str, rate: float) -> list[str]:
    return [
        ffmpeg_path(), "-v", "error",
        "-i", path,
        "-vf", f"fps={rate}:start_time=0",
        "-f", "rawvideo", "-pix_fmt", "rgb24",
        "pipe:1",
    ]


def frame_cmd(path: str, at: float) -> list[str]:
    return [
        ffmpeg_path(), "-v", "error",
        "-ss", f"{at:.6f}",
        "-i", path,
        "-frames:v", "1",
        "-f", "rawvideo", "-pix_fmt", "rgb24",
        "pipe:1",
    ]


def render_cmd(segments: list[dict], out: str) -> list[str]:
    """One input per segment, trimmed (and reversed when needed), concatenated."""
    cmd = [ffmpeg_path(), "-v", "error", "-y"]
    filters = []
    for i, seg in enumerate(segments):
        cmd += ["-i", seg["source_path"]]
        a, b = seg["entry_time_s"], seg["exit_time_s"]
        start, end = (b, a) if seg["direction"] == "reverse" else (a, b)
        chain = f"[{i}:v]trim=start={start:.6f}:end={end:.6f},setpts=PTS-STARTPTS"
        if seg["direction"] == "reverse":
            chain += ",reverse"
        filters.append(chain + f"[s{i}]")
    joins = "".join(f"[s{i}]" for i in range(len(segments)))
    filters.append(f"{joins}concat=n={len(segments)}:v=1:a=0[outv]")
    cmd += ["-filter_complex", ";".join(filters), "-map", "[outv]", out]
    return cmd


def _parse_rational(value: str) -> float:
    if not value or value == "0/0":
        return 0.0
    if "/" in value:
        num, denom = value.split("/", 1)
        return float(num) / float(denom) if float(denom) else 0.0
    return float(value)


def cmd_probe(args) -> None:
    raw = subprocess.run(probe_cmd(args.file), capture_output=True, check=True)
    doc = json.loads(raw.stdout.decode("utf-8"))
    stream = next(s for s in doc["streams"] if s.get("codec_type") == "video")
    duration = float(stream.get("duration") or doc["format"]["duration"])
    sys.stdout.write(json.dumps({
        "duration_s": duration,
        "fps": _parse_rational(stream.get("avg_frame_rate", "0/0")),
        "width": int(stream["width"]),
        "height": int(stream["height"]),
    }, sort_keys=True))
    sys.stdout.write("\n")


def cmd_frames(args) -> None:
    subprocess.run(frames_cmd(args.file, args.rate), stdout=sys.stdout.buffer, check=True)


def cmd_frame(args) -> None:
    subprocess.run(frame_cmd(args.file, args.at), stdout=sys.stdout.buffer, check=True)


def cmd_render(args) -> None:
    with open(args.cutlist, "r", encoding="utf-8") as fh:
        segments = json.load(fh)["segments"]
    subprocess.run(render_cmd(segments, args.out), check=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="videomap-media-ffmpeg", description=__doc__)
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
    if shutil.which(ffmpeg_path()) is None:
        print("videomap-media-ffmpeg: ffmpeg not found on PATH "
              "(set VIDEOMAP_FFMPEG)", file=sys.stderr)
        return 1
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except subprocess.CalledProcessError as exc:
        print(f"videomap-media-ffmpeg: ffmpeg failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
