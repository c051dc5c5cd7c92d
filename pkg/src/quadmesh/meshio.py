"""Plain-text OBJ and OFF triangle meshes.

Writers are deterministic: vertices use 9 significant digits and faces
keep the order they were given in, so identical meshes give identical bytes.
"""

from __future__ import annotations

import os
from typing import Tuple

import numpy as np

from .exceptions import MeshFormatError


def _fmt(v: float) -> str:
    s = f"{v:.9g}"
    return "0" if s == "-0" else s


def _check(vertices, triangles):
    V = np.asarray(vertices, dtype=float)
    F = np.asarray(triangles, dtype=np.int64)
    if V.ndim != 2 or V.shape[1] != 3:
        raise ValueError(f"vertices must have shape (n, 3), got {V.shape}")
    if F.ndim != 2 or F.shape[1] != 3:
        raise ValueError(f"triangles must have shape (m, 3), got {F.shape}")
    if F.size and (F.min() < 0 or F.max() >= V.shape[0]):
        raise ValueError("triangle index out of range")
    return V, F


def format_obj(vertices, triangles) -> str:
    V, F = _check(vertices, triangles)
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in V.tolist()]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in F.tolist()]
    return "\n".join(lines) + "\n"


def format_off(vertices, triangles) -> str:
    V, F = _check(vertices, triangles)
    lines = ["OFF", f"{V.shape[0]} {F.shape[0]} 0"]
    lines += [f"{_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in V.tolist()]
    lines += [f"3 {i} {j} {k}" for i, j, k in F.tolist()]
    return "\n".join(lines) + "\n"


def mesh_format(path) -> str:
    ext = os.path.splitext(str(path))[1].lower()
    if ext not in (".obj", ".off"):
        raise ValueError(f"unsupported mesh extension {ext!r}; use .obj or .off")
    return ext[1:]


def write_mesh(path, vertices, triangles) -> None:
    """Write OBJ or OFF depending on the file extension."""
    text = format_obj(vertices, triangles) if mesh_format(path) == "obj" else format_off(vertices, triangles)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _parse_obj(lines):
    verts, faces = [], []
    for n, line in enumerate(lines, 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        tag = parts[0]
        try:
            if tag == "v":
                verts.append([float(t) for t in parts[1:4]])
                if len(parts) < 4:
                    raise ValueError
            elif tag == "f":
                idx = [int(t.split("/")[0]) for t in parts[1:]]
                if len(idx) != 3:
                    raise MeshFormatError(f"line {n}: only triangles are supported")
                faces.append([i - 1 if i > 0 else len(verts) + i for i in idx])
        except ValueError:
            raise MeshFormatError(f"line {n}: cannot parse {line.strip()!r}") from None
    return verts, faces


def _parse_off(lines):
    body = [ln.split("#")[0].split() for ln in lines]
    body = [t for t in body if t]
    if not body or body[0][0] != "OFF":
        raise MeshFormatError("missing OFF header")
    head = body[0][1:] or (body[1] if len(body) > 1 else [])
    start = 1 if body[0][1:] else 2
    try:
        nv, nf = int(head[0]), int(head[1])
        verts = [[float(t) for t in row[:3]] for row in body[start : start + nv]]
        faces = []
        for row in body[start + nv : start + nv + nf]:
            if int(row[0]) != 3:
                raise MeshFormatError("only triangles are supported")
            faces.append([int(t) for t in row[1:4]])
    except (ValueError, IndexError):
        raise MeshFormatError("malformed OFF body") from None
    if len(verts) != nv or len(faces) != nf or any(len(v) != 3 for v in verts) or any(len(f) != 3 for f in faces):
        raise MeshFormatError("OFF counts do not match the data")
    return verts, faces


def read_mesh(path) -> Tuple[np.ndarray, np.ndarray]:
    """Read a triangle mesh; returns (vertices (n, 3), triangles (m, 3) 0-indexed)."""
    kind = mesh_format(path)
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    verts, faces = _parse_obj(lines) if kind == "obj" else _parse_off(lines)
    if not verts or not faces:
        raise MeshFormatError(f"{path}: mesh has no vertices or no faces")
    V = np.array(verts, dtype=float)
    F = np.array(faces, dtype=np.int64)
    if F.min() < 0 or F.max() >= V.shape[0]:
        raise MeshFormatError(f"{path}: face index out of range")
    if not np.all(np.isfinite(V)):
        raise MeshFormatError(f"{path}: non-finite vertex coordinate")
    return V, F
