"""Dataset manifests and scene ingestion for the benchmark harness.

A manifest is a JSON file describing the scenes of one dataset: per scene,
its grayscale band files sorted by wavelength and the RGB guide file. The
ground truth for enhancement is always the band with the longest
wavelength. Datasets with incompatible on-disk layouts (CAVE, Harvard,
TokyoTech) are all described through the same schema; the repository ships
manifests and generators, never the data itself.

Manifest schema::

    {
      "name": "cave",
      "root": ".",                      # optional, relative to the manifest
      "scenes": [
        {
          "id": "scene_name",
          "bands": [
            {"wavelength_nm": 450, "path": "scene_name/band_0450.png"},
            ...
          ],
          "guide": "scene_name/guide.png"
        }
      ]
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .image import PlanarImage, load_image
from .resample import ScaleFactor


@dataclass(frozen=True)
class BandEntry:
    wavelength_nm: float
    path: Path


@dataclass(frozen=True)
class SceneEntry:
    scene_id: str
    bands: tuple[BandEntry, ...]  # sorted by wavelength, strictly increasing
    # None when the manifest omits the guide (it still describes the scene,
    # but the scene cannot be ingested until a guide is rendered).
    guide_path: Path | None

    @property
    def ground_truth_path(self) -> Path:
        """The longest-wavelength band file."""
        return self.bands[-1].path


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    root: Path
    scenes: tuple[SceneEntry, ...]


@dataclass(frozen=True)
class SceneData:
    """One ingested scene: ground-truth IR band plus its RGB guide."""

    scene_id: str
    gt: PlanarImage
    guide: PlanarImage


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse and validate a dataset manifest file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"manifest {path} must be a JSON object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ValueError(f"manifest {path} is missing a dataset 'name'")
    root = path.parent / raw.get("root", ".")
    scenes_raw = raw.get("scenes")
    if not isinstance(scenes_raw, list) or not scenes_raw:
        raise ValueError(f"manifest {path} declares no scenes")
    scenes = []
    seen_ids: set[str] = set()
    for entry in scenes_raw:
        scene = _parse_scene(entry, root, path)
        if scene.scene_id in seen_ids:
            raise ValueError(f"duplicate scene id '{scene.scene_id}' in manifest {path}")
        seen_ids.add(scene.scene_id)
        scenes.append(scene)
    return DatasetManifest(name=name, root=root, scenes=tuple(scenes))


def _parse_scene(entry: object, root: Path, manifest_path: Path) -> SceneEntry:
    if not isinstance(entry, dict):
        raise ValueError(f"malformed scene entry in manifest {manifest_path}")
    scene_id = entry.get("id")
    if not isinstance(scene_id, str) or not scene_id:
        raise ValueError(f"scene without an 'id' in manifest {manifest_path}")
    bands_raw = entry.get("bands")
    if not isinstance(bands_raw, list) or not bands_raw:
        raise ValueError(f"scene '{scene_id}' has no band files")
    bands = []
    for band in bands_raw:
        if not isinstance(band, dict) or "wavelength_nm" not in band or "path" not in band:
            raise ValueError(f"scene '{scene_id}' has a malformed band entry")
        bands.append(BandEntry(float(band["wavelength_nm"]), root / band["path"]))
    bands.sort(key=lambda b: b.wavelength_nm)
    wavelengths = [b.wavelength_nm for b in bands]
    if any(w2 <= w1 for w1, w2 in zip(wavelengths, wavelengths[1:])):
        raise ValueError(f"scene '{scene_id}' has duplicate band wavelengths")
    guide = entry.get("guide")
    if guide is not None and (not isinstance(guide, str) or not guide):
        raise ValueError(f"scene '{scene_id}' has a malformed guide path")
    guide_path = root / guide if guide is not None else None
    return SceneEntry(scene_id=scene_id, bands=tuple(bands), guide_path=guide_path)


def crop_size_for(length: int, divisor: int) -> int:
    """Largest multiple of ``divisor`` that is <= length (0 if none fits)."""
    return (length // divisor) * divisor


def _center_crop(img: PlanarImage, height: int, width: int) -> PlanarImage:
    if (img.height, img.width) == (height, width):
        return img
    top = (img.height - height) // 2
    left = (img.width - width) // 2
    return PlanarImage(img.planes[:, top : top + height, left : left + width])


def ingest_dataset(
    manifest: DatasetManifest, scales: Sequence[ScaleFactor] | None = None
) -> list[SceneData]:
    """Load all scenes: longest-wavelength band as ground truth plus guide.

    When ``scales`` is given, both images are center-cropped to the largest
    size divisible by the least common multiple of the requested factors
    (width and height independently); padding would fabricate content and
    bias the metrics. Scenes come back sorted by id so downstream
    aggregation is order-stable.
    """
    div_x = _lcm(s.sx for s in scales) if scales else 1
    div_y = _lcm(s.sy for s in scales) if scales else 1
    ingested = []
    for scene in sorted(manifest.scenes, key=lambda s: s.scene_id):
        if scene.guide_path is None:
            raise ValueError(f"scene '{scene.scene_id}': missing guide file (none in manifest)")
        try:
            gt = load_image(scene.ground_truth_path)
            guide = load_image(scene.guide_path)
        except (OSError, ValueError) as exc:
            raise type(exc)(f"scene '{scene.scene_id}': {exc}") from exc
        if gt.channels != 1:
            raise ValueError(
                f"scene '{scene.scene_id}': ground-truth band {scene.ground_truth_path} "
                f"has {gt.channels} channels, expected grayscale"
            )
        if guide.channels != 3:
            raise ValueError(
                f"scene '{scene.scene_id}': guide {scene.guide_path} has "
                f"{guide.channels} channel(s), expected RGB"
            )
        if (gt.height, gt.width) != (guide.height, guide.width):
            raise ValueError(
                f"scene '{scene.scene_id}': band is {gt.width}x{gt.height} but guide is "
                f"{guide.width}x{guide.height}"
            )
        height = crop_size_for(gt.height, div_y)
        width = crop_size_for(gt.width, div_x)
        if height == 0 or width == 0:
            raise ValueError(
                f"scene '{scene.scene_id}': image {gt.width}x{gt.height} is smaller than "
                f"one {div_x}x{div_y} block"
            )
        ingested.append(
            SceneData(
                scene_id=scene.scene_id,
                gt=_center_crop(gt, height, width),
                guide=_center_crop(guide, height, width),
            )
        )
    return ingested


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
