"""JSON sequence documents.

Shape::

    {"width": W, "height": H,
     "frames": [{"index": 0, "skeletons": [{"id": 3, "joints": [[x, y], null, ...]}]}]}

Each skeleton lists exactly 14 joints; ``null`` marks an absent joint.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import SkeletonCodecError
from .model import NUM_JOINTS, Frame, Sequence, Skeleton, validate_sequence


class DocumentError(SkeletonCodecError, ValueError):
    pass


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise DocumentError(f"{where}: expected an integer, got {value!r}")


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected an array")
    return value


def sequence_from_document(doc: Any) -> Sequence:
    """Parse and validate a document; skeletons are put in ascending ID order."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("width", "height", "frames"):
        if key not in doc:
            raise DocumentError(f"missing key {key!r}")
    width = _int(doc["width"], "width")
    height = _int(doc["height"], "height")
    frames = []
    for fi, fdoc in enumerate(_list(doc["frames"], "frames")):
        where = f"frames[{fi}]"
        if not isinstance(fdoc, dict) or "skeletons" not in fdoc:
            raise DocumentError(f"{where}: expected an object with 'skeletons'")
        index = _int(fdoc.get("index", fi), f"{where}.index")
        skeletons = []
        for si, sdoc in enumerate(_list(fdoc["skeletons"], f"{where}.skeletons")):
            swhere = f"{where}.skeletons[{si}]"
            if not isinstance(sdoc, dict) or "id" not in sdoc or "joints" not in sdoc:
                raise DocumentError(f"{swhere}: expected an object with 'id' and 'joints'")
            raw = _list(sdoc["joints"], f"{swhere}.joints")
            if len(raw) != NUM_JOINTS:
                raise DocumentError(f"{swhere}.joints: expected {NUM_JOINTS} entries, got {len(raw)}")
            joints = []
            for j, p in enumerate(raw, 1):
                if p is None:
                    joints.append(None)
                    continue
                if not isinstance(p, list) or len(p) != 2:
                    raise DocumentError(f"{swhere}.joints[{j - 1}]: expected [x, y] or null")
                joints.append((_int(p[0], f"{swhere} joint {j} x"), _int(p[1], f"{swhere} joint {j} y")))
            skeletons.append(Skeleton(_int(sdoc["id"], f"{swhere}.id"), tuple(joints)))
        skeletons.sort(key=lambda s: s.id)
        frames.append(Frame(index, tuple(skeletons)))
    seq = Sequence(width, height, tuple(frames))
    problems = validate_sequence(seq)
    if problems:
        shown = "; ".join(str(p) for p in problems[:5])
        more = f" (+{len(problems) - 5} more)" if len(problems) > 5 else ""
        raise DocumentError(f"invalid sequence: {shown}{more}")
    return seq


def sequence_to_document(seq: Sequence) -> dict:
    return {
        "width": seq.width,
        "height": seq.height,
        "frames": [
            {
                "index": f.index,
                "skeletons": [
                    {"id": s.id, "joints": [None if p is None else [p[0], p[1]] for p in s.joints]}
                    for s in f.skeletons
                ],
            }
            for f in seq.frames
        ],
    }


def dumps(seq: Sequence) -> str:
    """Canonical text form: one frame per line, compact separators."""
    doc = sequence_to_document(seq)
    head = f'{{"width":{seq.width},"height":{seq.height},"frames":['
    if not doc["frames"]:
        return head + "]}\n"
    lines = [json.dumps(f, separators=(",", ":")) for f in doc["frames"]]
    return head + "\n" + ",\n".join(lines) + "\n]}\n"


def loads(text: str) -> Sequence:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return sequence_from_document(doc)


def load_sequence(path: str | Path) -> Sequence:
    return loads(Path(path).read_text())


def save_sequence(seq: Sequence, path: str | Path) -> None:
    Path(path).write_text(dumps(seq))
