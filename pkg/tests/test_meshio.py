import numpy as np
import pytest

from quadmesh import MeshFormatError, format_obj, format_off, read_mesh, write_mesh

V = np.array([[0.0, 0.0, 1.0 / 3.0], [1.0, 0.0, -0.0], [0.0, 1.0, 123456.789012]])
F = np.array([[0, 1, 2]])


def test_obj_text():
    assert format_obj(V, F) == "v 0 0 0.333333333\nv 1 0 0\nv 0 1 123456.789\nf 1 2 3\n"


def test_off_text():
    assert format_off(V, F) == "OFF\n3 1 0\n0 0 0.333333333\n1 0 0\n0 1 123456.789\n3 0 1 2\n"


@pytest.mark.parametrize("ext", ["obj", "off"])
def test_round_trip(tmp_path, ext):
    path = tmp_path / f"m.{ext}"
    write_mesh(path, V, F)
    V2, F2 = read_mesh(path)
    assert np.array_equal(F2, F)
    assert np.allclose(V2, V, rtol=1e-8)


def test_rejects_unknown_extension(tmp_path):
    with pytest.raises(ValueError):
        write_mesh(tmp_path / "m.stl", V, F)


def test_bad_indices():
    with pytest.raises(ValueError):
        format_obj(V, [[0, 1, 3]])


@pytest.mark.parametrize(
    "name, text",
    [
        ("empty.obj", ""),
        ("nofaces.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\n"),
        ("junk.obj", "v 0 zero 0\nf 1 2 3\n"),
        ("quad.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4 3\n"),
        ("range.obj", "v 0 0 0\nf 1 2 3\n"),
        ("empty.off", ""),
        ("header.off", "NOFF\n3 1 0\n"),
        ("short.off", "OFF\n3 1 0\n0 0 0\n1 0 0\n"),
    ],
)
def test_malformed(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    with pytest.raises(MeshFormatError):
        read_mesh(path)


def test_obj_tolerates_comments_and_slashes(tmp_path):
    path = tmp_path / "m.obj"
    path.write_text("# header\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n")
    V2, F2 = read_mesh(path)
    assert F2.tolist() == [[0, 1, 2]] and V2.shape == (3, 3)
