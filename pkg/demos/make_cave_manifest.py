"""Build a dataset manifest for a local copy of the CAVE multispectral set.

CAVE (https://www.cs.columbia.edu/CAVE/databases/multispectral/) unpacks
to one directory per scene containing 31 band images named
``<scene>_ms_01.png`` ... ``<scene>_ms_31.png`` (400 nm to 700 nm in
10 nm steps) plus an RGB rendering ``<scene>_RGB.bmp``. This script
walks that tree, converts each BMP guide to PNG (the library reads
PNG/PNM only), and writes a ``manifest.json`` that `girre evaluate`
accepts directly. Band 31 (700 nm, the nearest-to-IR band) becomes the
ground truth, matching how the evaluation harness picks the longest
wavelength.

Usage:
    python demos/make_cave_manifest.py /data/cave/complete_ms_data
    girre evaluate --manifest /data/cave/complete_ms_data/manifest.json
"""

import argparse
import json
import re
import sys
from pathlib import Path

import cv2

BAND_RE = re.compile(r"_ms_(\d{2})\.png$")


def find_scenes(root: Path):
    """Yield (scene_id, band_paths_by_index, guide_path) per scene dir."""
    for path in sorted(root.rglob("*_ms_01.png")):
        scene_dir = path.parent
        bands = {}
        for band in scene_dir.glob("*_ms_*.png"):
            m = BAND_RE.search(band.name)
            if m:
                bands[int(m.group(1))] = band
        guides = sorted(scene_dir.glob("*RGB*")) or sorted(scene_dir.parent.glob("*RGB*"))
        yield scene_dir.name.removesuffix("_ms"), bands, guides[0] if guides else None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("root", type=Path, help="unpacked CAVE directory (complete_ms_data)")
    ap.add_argument("--out", type=Path, help="manifest path (default: <root>/manifest.json)")
    args = ap.parse_args()

    scenes = []
    for scene_id, bands, guide in find_scenes(args.root):
        if len(bands) != 31:
            print(f"skipping {scene_id}: found {len(bands)} band files, expected 31",
                  file=sys.stderr)
            continue
        if guide is None:
            print(f"skipping {scene_id}: no RGB guide found", file=sys.stderr)
            continue
        if guide.suffix.lower() != ".png":
            png_guide = guide.with_suffix(".png")
            if not png_guide.exists():
                cv2.imwrite(str(png_guide), cv2.imread(str(guide), cv2.IMREAD_COLOR))
            guide = png_guide
        scenes.append(
            {
                "id": scene_id,
                "bands": [
                    {"wavelength_nm": 400 + 10 * (idx - 1),
                     "path": str(bands[idx].relative_to(args.root))}
                    for idx in sorted(bands)
                ],
                "guide": str(guide.relative_to(args.root)),
            }
        )

    if not scenes:
        print(f"no CAVE scenes found under {args.root}", file=sys.stderr)
        return 1

    out = args.out or args.root / "manifest.json"
    out.write_text(json.dumps({"name": "CAVE", "scenes": scenes}, indent=2) + "\n")
    print(f"wrote {out} with {len(scenes)} scenes")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
