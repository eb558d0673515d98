"""videomap command line: the full pipeline, headless.

    videomap ingest footage/ --rate 1.0
    videomap embed --lens all --model-file model.npz
    videomap project --lens all --seed 7
    videomap paths v1 3 --lens color -k 10
    videomap route v1 v2 v3 --lens color --out cutlist.json
    videomap render cutlist.json --out cut.mp4
    videomap serve --addr 127.0.0.1:8080

Exit codes: 0 ok, 2 usage, 3 engine error, 4 provider/model error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from videomap import errors as E
from videomap.canon import canonical_dumps

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENGINE = 3
EXIT_PROVIDER = 4

MODEL_LENSES = {"semantic": True, "shape": False}  # name -> supports_text


def _load(args):
    from videomap.store import load_project

    return load_project(args.project)


def _save(args, project, lens_meta):
    from videomap.store import save_project

    save_project(project, args.project, lens_meta)


def _registry(args, lens_meta):
    from videomap.build import build_registry

    return build_registry(lens_meta,
                          provider_url=getattr(args, "provider", None),
                          model_file=getattr(args, "model_file", None))


def _media():
    from videomap.media import MediaTool

    return MediaTool()


def _emit(args, payload: dict, human: str) -> None:
    if getattr(args, "json", False):
        print(canonical_dumps(payload))
    else:
        print(human)


def cmd_ingest(args) -> int:
    from videomap.build import ingest_directory
    from videomap.lens import COLOR
    from videomap.project import ProjectConfig

    config = ProjectConfig(sample_rate_hz=args.rate)
    project = ingest_directory(args.project, args.media_dir,
                               media=_media(), config=config)
    lens_meta = {COLOR.name: COLOR}
    _save(args, project, lens_meta)
    total = sum(a.frame_count for a in project.assets.values())
    print(f"ingested {len(project.assets)} videos, {total} frames "
          f"at {args.rate} Hz -> {args.project}")
    return EXIT_OK


def cmd_embed(args) -> int:
    from videomap.build import embed_lens
    from videomap.lens import COLOR, LensId

    project, lens_meta = _load(args)
    if args.lens == "all":
        targets = [COLOR]
        if args.provider or args.model_file or os.environ.get("VIDEOMAP_PROVIDER_URL"):
            targets += [LensId(n, supports_text=t) for n, t in MODEL_LENSES.items()]
        else:
            print("no provider configured; embedding color lens only",
                  file=sys.stderr)
    elif args.lens == COLOR.name:
        targets = [COLOR]
    elif args.lens in MODEL_LENSES:
        targets = [LensId(args.lens, supports_text=MODEL_LENSES[args.lens])]
    else:
        raise E.LensNotFound(args.lens)

    meta = dict(lens_meta)
    for lens in targets:
        meta[lens.name] = lens
    registry = _registry(args, meta)
    media = _media()
    for lens in targets:
        embed_lens(project, lens, registry, media)
        print(f"embedded lens {lens.name}: {len(project.vectors[lens.name])} vectors")
    _save(args, project, meta)
    return EXIT_OK


def cmd_project(args) -> int:
    from dataclasses import replace

    from videomap.build import build_map_semantics, layout_lens, resolve_lenses
    from videomap.projection import TsneConfig

    project, lens_meta = _load(args)
    if args.seed is not None:
        tsne = TsneConfig(perplexity=project.config.tsne.perplexity,
                          iterations=project.config.tsne.iterations,
                          learning_rate=project.config.tsne.learning_rate,
                          seed=args.seed)
        project.config = replace(project.config, tsne=tsne)
    for lens in resolve_lenses(lens_meta, args.lens):
        if lens.name not in project.vectors:
            raise E.MissingVectors(f"lens {lens.name!r}: run `videomap embed` first")
        layout_lens(project, lens.name)
        build_map_semantics(project, lens.name)
        print(f"projected lens {lens.name}: {len(project.layouts[lens.name])} points")
    _save(args, project, lens_meta)
    return EXIT_OK


def cmd_paths(args) -> int:
    from videomap.mapmodel import nearest_paths, node_details

    project, _ = _load(args)
    frame = (args.video, args.frame)
    edges = nearest_paths(project, args.lens, frame, k=args.k)
    details = node_details(project, frame)
    payload = {
        "lens": args.lens, "query": list(frame), "node": details,
        "edges": [{"from": list(e.from_frame), "to": list(e.to_frame),
                   "distance": e.distance} for e in edges],
    }
    lines = [f"{details['filename']} @ {details['timecode']}  "
             f"({len(edges)} paths, lens={args.lens})"]
    for e in edges:
        lines.append(f"  -> {e.to_frame[0]}#{e.to_frame[1]}  d={e.distance:.6f}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _write_cutlist(args, cutlist, project) -> None:
    from videomap.routing import cutlist_to_json

    text = cutlist_to_json(cutlist, project)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)


def cmd_route(args) -> int:
    from videomap.routing import build_streets, plan_route, route_to_cutlist

    project, _ = _load(args)
    streets = build_streets(project, args.lens, args.videos,
                            stride=project.config.street_stride)
    route = plan_route(streets, args.videos, lens=args.lens)
    payload = {
        "lens": route.lens, "order": list(route.order),
        "total_weight": route.total_weight,
        "transitions": [{"from": list(t.from_frame), "to": list(t.to_frame),
                         "distance": t.distance} for t in route.transitions],
    }
    human = [" -> ".join(route.order) + f"  (total {route.total_weight:.6f})"]
    for t in route.transitions:
        human.append(f"  {t.from_frame[0]}#{t.from_frame[1]} -> "
                     f"{t.to_frame[0]}#{t.to_frame[1]}  d={t.distance:.6f}")
    _emit(args, payload, "\n".join(human))
    if args.out:
        cutlist = route_to_cutlist(route, project,
                                   min_segment_s=project.config.min_segment_s)
        _write_cutlist(args, cutlist, project)
    return EXIT_OK


def cmd_search(args) -> int:
    from videomap.search import prompt_search

    project, lens_meta = _load(args)
    registry = _registry(args, lens_meta)
    result = prompt_search(project, registry, args.lens, args.prompt, k=args.k)
    payload = {
        "prompt": result.prompt, "lens": result.lens,
        "per_video_scores": result.per_video_scores,
        "highlighted": list(result.highlighted),
        "best_frame": {v: list(k) for v, k in result.best_frame.items()},
    }
    lines = [f"top {len(result.highlighted)} for {args.prompt!r}:"]
    for vid in result.highlighted:
        lines.append(f"  {vid}  score={result.per_video_scores[vid]:.6f}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_summarize(args) -> int:
    from videomap.extensions import build_semantic_districts, summarize

    project, _ = _load(args)
    ds = build_semantic_districts(project, args.lens, args.video, seed=args.seed)
    order = args.landmarks.split(",") if args.landmarks else [d.id for d in ds.districts]
    cutlist = summarize(project, ds, order)
    payload = {
        "video_id": ds.video_id, "k": ds.k, "wcss_curve": list(ds.wcss_curve),
        "segments": [{"entry_time_s": s.entry_time_s, "exit_time_s": s.exit_time_s}
                     for s in cutlist.segments],
    }
    human = [f"{args.video}: k={ds.k} districts "
             f"({', '.join(d.id for d in ds.districts)})"]
    for seg in cutlist.segments:
        human.append(f"  [{seg.entry_time_s:.3f}, {seg.exit_time_s:.3f}]s")
    _emit(args, payload, "\n".join(human))
    if args.out:
        _write_cutlist(args, cutlist, project)
    return EXIT_OK


def cmd_highlight(args) -> int:
    from videomap.extensions import decode_image, find_highlight

    project, lens_meta = _load(args)
    registry = _registry(args, lens_meta)
    with open(args.photo, "rb") as fh:
        image = decode_image(fh.read())
    result = find_highlight(project, registry, args.lens, image)
    payload = {
        "lens": result.lens, "nearest_frame": list(result.nearest_frame),
        "clip": {"start_s": result.clip_start_s, "end_s": result.clip_end_s},
        "neighbors": [{"frame": list(k), "distance": d}
                      for k, d in result.neighbors],
    }
    vid, fi = result.nearest_frame
    human = (f"nearest frame {vid}#{fi}; "
             f"clip [{result.clip_start_s:.3f}, {result.clip_end_s:.3f}]s")
    _emit(args, payload, human)
    return EXIT_OK


def cmd_story(args) -> int:
    from videomap.routing import chain_in_order, route_to_cutlist
    from videomap.search import match_story

    project, lens_meta = _load(args)
    registry = _registry(args, lens_meta)
    with open(args.sentences, "r", encoding="utf-8") as fh:
        sentences = [line.strip() for line in fh if line.strip()]
    order = match_story(project, registry, args.lens, sentences)
    route = chain_in_order(project, args.lens, order,
                           stride=project.config.street_stride)
    payload = {"order": order, "total_weight": route.total_weight}
    _emit(args, payload,
          " -> ".join(order) + f"  (total {route.total_weight:.6f})")
    if args.out:
        cutlist = route_to_cutlist(route, project,
                                   min_segment_s=project.config.min_segment_s)
        _write_cutlist(args, cutlist, project)
    return EXIT_OK


def cmd_render(args) -> int:
    _media().render(args.cutlist, args.out)
    print(f"rendered {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from videomap.api import serve

    serve(args.project, args.addr, provider_url=args.provider,
          model_file=args.model_file)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="videomap",
        description="Lens-specific maps of video collections: build, explore, cut.")
    parser.add_argument("--project", "-P", default=".",
                        help="project directory (default: current directory)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="scan a directory of footage")
    p.add_argument("media_dir")
    p.add_argument("--rate", type=float, default=1.0, help="sample rate in Hz")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("embed", help="compute lens vectors for every frame")
    p.add_argument("--lens", default="all")
    p.add_argument("--provider", help="embedding service base URL")
    p.add_argument("--model-file", help="local .npz model asset")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("project", help="t-SNE layout + districts + landmarks")
    p.add_argument("--lens", default="all")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_project)

    p = sub.add_parser("paths", help="nearest cross-video transitions for a frame")
    p.add_argument("video")
    p.add_argument("frame", type=int)
    p.add_argument("--lens", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_paths)

    p = sub.add_parser("route", help="shortest path through selected videos")
    p.add_argument("videos", nargs="+")
    p.add_argument("--lens", required=True)
    p.add_argument("--out", help="write CutList JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_route)

    p = sub.add_parser("search", help="prompt search over a text-capable lens")
    p.add_argument("prompt")
    p.add_argument("--lens", default="semantic")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--provider")
    p.add_argument("--model-file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("summarize", help="semantic districts + summary cutlist")
    p.add_argument("video")
    p.add_argument("--lens", default="semantic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--landmarks", help="comma-separated district ids, in order")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_summarize)

    p = sub.add_parser("highlight", help="snap a photo to its nearest frame")
    p.add_argument("photo")
    p.add_argument("--lens", default="semantic")
    p.add_argument("--provider")
    p.add_argument("--model-file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_highlight)

    p = sub.add_parser("story", help="order videos to match a sentence list")
    p.add_argument("sentences", help="text file, one sentence per line")
    p.add_argument("--lens", default="semantic")
    p.add_argument("--provider")
    p.add_argument("--model-file")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_story)

    p = sub.add_parser("render", help="render a CutList to a media file")
    p.add_argument("cutlist")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("serve", help="serve the HTTP API over a project")
    p.add_argument("--addr", default="127.0.0.1:8080")
    p.add_argument("--provider")
    p.add_argument("--model-file")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (E.ProviderUnavailable, E.ModelAssetMissing) as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except E.EngineError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
