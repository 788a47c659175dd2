import json
import math
import os
import pathlib

import numpy as np
import pytest

import cogito

DATA = pathlib.Path(os.environ.get("COGITO_TEST_DATA", pathlib.Path(__file__).parents[1] / "data"))

MASK = (1 << 64) - 1
FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211
LCG_MUL = 6364136223846793005
LCG_INC = 1442695040888963407


# Plain-Python reimplementations used as oracles for the native code.

def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & MASK
    return h


def lcg_units(seed, count, skip=0):
    state = seed
    out = []
    for i in range(skip + count):
        state = (state * LCG_MUL + LCG_INC) & MASK
        if i >= skip:
            out.append((state >> 11) * 2.0**-52 - 1.0)
    return out


def oracle_hash_embed(text, dim):
    v = lcg_units(fnv1a64(text.encode()), dim)
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def oracle_procedural(prompt, h, w, seed):
    base = fnv1a64(prompt.encode()) ^ seed

    def lattice(octave, ch, ix, iy):
        key = base ^ ((ix * FNV_PRIME) & MASK) ^ ((iy * LCG_MUL) & MASK) ^ (((ch * 4 + octave + 1) * LCG_INC) & MASK)
        return lcg_units(key, 1, skip=1)[0]

    img = np.zeros((h, w, 3), dtype=np.uint8)
    for r in range(h):
        for c in range(w):
            for ch in range(3):
                value, amp, total, cell = 0.0, 1.0, 0.0, max(h, w) / 2.0
                for o in range(3):
                    fx, fy = c / cell, r / cell
                    ix, iy = math.floor(fx), math.floor(fy)
                    tx, ty = fx - ix, fy - iy
                    v00, v10 = lattice(o, ch, ix, iy), lattice(o, ch, ix + 1, iy)
                    v01, v11 = lattice(o, ch, ix, iy + 1), lattice(o, ch, ix + 1, iy + 1)
                    top = v00 + (v10 - v00) * tx
                    bottom = v01 + (v11 - v01) * tx
                    value += amp * (top + (bottom - top) * ty)
                    total += amp
                    amp *= 0.5
                    cell /= 2.0
                img[r, c, ch] = min(255, max(0, math.floor((value / total + 1.0) * 127.5 + 0.5)))
    return img


def oracle_sketch(gray, sigma):
    radius = max(1, math.ceil(3 * sigma))
    k = np.exp(-(np.arange(-radius, radius + 1) ** 2) / (2 * sigma * sigma))
    k /= k.sum()
    kernel = np.outer(k, k)
    inv = 255.0 - gray.astype(np.float64)
    padded = np.pad(inv, radius, mode="symmetric")
    h, w = gray.shape
    blur = np.zeros((h, w))
    for dy in range(2 * radius + 1):
        for dx in range(2 * radius + 1):
            blur += kernel[dy, dx] * padded[dy:dy + h, dx:dx + w]
    blur = np.clip(np.floor(blur + 0.5), 0, 255).astype(np.int64)
    g = gray.astype(np.int64)
    d = np.maximum(1, 255 - blur)
    return np.minimum(255, (2 * g * 255 + d) // (2 * d)).astype(np.uint8)


def test_cosine_and_ranking():
    assert cogito.cosine_similarity([1, 0], [1, 1]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    with pytest.raises(cogito.CogitoError) as info:
        cogito.cosine_similarity([0, 0], [1, 1])
    assert info.value.code == "ZeroNorm"
    ranked = cogito.rank_contexts([1, 0], [[0, 1], [1, 0.1], [1, 1]], ["a", "b", "c"])
    assert [i for i, _ in ranked] == [1, 2, 0]


def test_hash_embed_matches_oracle():
    for text in ["keys", "a pile of papers on a table", "ü"]:
        for dim in (2, 8, 64):
            assert cogito.hash_embed(text, dim) == oracle_hash_embed(text, dim)


def test_procedural_image_matches_oracle():
    for prompt, h, w, seed in [("the man opens the door", 8, 8, 0), ("the man goes towards the door", 12, 16, 1)]:
        native = cogito.procedural_image(prompt, h, w, seed)
        assert native.shape == (h, w, 3)
        assert np.array_equal(native, oracle_procedural(prompt, h, w, seed))


def test_sketch_matches_oracle():
    row = np.array([[100, 100, 100, 200, 200, 200]], dtype=np.uint8)
    assert cogito.dodge_sketch(row, 1.0).tolist() == [[255, 241, 196, 255, 255, 255]]

    rng = np.random.default_rng(5)
    for sigma in (0.5, 1.0, 2.5):
        gray = rng.integers(0, 256, size=(19, 23), dtype=np.uint8)
        diff = np.abs(cogito.dodge_sketch(gray, sigma).astype(int) - oracle_sketch(gray, sigma).astype(int))
        assert diff.max() <= 1
        assert np.count_nonzero(diff) <= 0.01 * diff.size

    rgb = cogito.procedural_image("a desk", 16, 16, 2)
    assert np.array_equal(cogito.sketchify(rgb, 2.0), cogito.dodge_sketch(cogito.to_grayscale(rgb), 2.0))
    assert sum(cogito.gaussian_kernel(1.5)) == pytest.approx(1.0, abs=1e-12)


def test_pgm_bytes():
    assert cogito.encode_pgm(np.array([[0, 255], [128, 7]], dtype=np.uint8)) == b"P5\n2 2\n255\n\x00\xff\x80\x07"


def test_text_helpers():
    assert cogito.parse_actions("a - b -  - c") == ["a", "b", "c"]
    prompt = cogito.build_prompt(["a pile of papers on a table"], "need the keys")
    assert "a pile of papers on a table" in prompt and "need the keys" in prompt
    assert cogito.template_generate("nothing relevant") == "observe the environment"
    line = cogito.format_ranking(["x", "y"], [0.1, 0.9]).splitlines()
    assert line == ["x - Similarity: 0.1000", "y - Similarity: 0.9000 *"]


def test_reference_table():
    contexts = (DATA / "keys_contexts.txt").read_text().splitlines()
    trace = json.loads(cogito.run_scenario(DATA / "keys.json"))
    cycle = trace["cycles"][0]
    top = max(cycle["ranking"], key=lambda e: e["score"])
    chosen = next(o for o in cycle["context_snapshot"] if o["sentence"]["id"] == top["sentence_id"])
    assert chosen["sentence"]["text"] == "a laptop computer with a bunch of keys on it"
    assert chosen["sentence"]["text"] in contexts
    assert round(top["score"], 4) == 0.4531


def test_validate_and_cli(tmp_path):
    assert cogito.validate_scenario(DATA / "keys.json") == []
    assert [f for f, _ in cogito.validate_scenario(DATA / "empty_need.json")] == ["needs[0].text"]

    code, out, err = cogito.run_cli(DATA / "keys.json", tmp_path / "a")
    assert code == 0, err
    code, _, _ = cogito.run_cli(DATA / "keys.json", tmp_path / "b")
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["cycle0_action0.pgm", "cycle0_action1.pgm", "cycle0_action2.pgm", "ranking.txt", "trace.json"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    code, _, _ = cogito.run_cli(DATA / "empty_need.json", tmp_path / "c")
    assert code == 2
