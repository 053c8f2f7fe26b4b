import numpy as np
import pytest

from tracklink.geometry import (
    Mask,
    area,
    bounding_box,
    centroid,
    euclidean_similarity,
    intersection_area,
    iou,
    rle_decode,
    rle_encode,
    shift,
)


def random_mask(rng, width=32, height=32, density=0.3) -> Mask:
    return rle_encode(rng.random((height, width)) < density)


def iou_bitmap(a: Mask, b: Mask) -> float:
    """Independent oracle: IOU on decoded bitmaps."""
    ba, bb = rle_decode(a), rle_decode(b)
    union = np.logical_or(ba, bb).sum()
    return np.logical_and(ba, bb).sum() / union if union else 0.0


class TestArea:
    def test_empty(self):
        assert area(Mask.empty(4, 4)) == 0

    def test_full(self):
        assert area(rle_encode(np.ones((4, 4)))) == 16

    def test_two_runs(self):
        m = Mask(4, 4, ((0, 0, 3), (1, 1, 1)))
        assert area(m) == rle_decode(m).sum() == 4


class TestIou:
    def test_identical(self):
        m = Mask(4, 4, ((1, 1, 2),))
        assert iou(m, m) == 1.0

    def test_disjoint(self):
        a = Mask(4, 4, ((0, 0, 2),))
        b = Mask(4, 4, ((3, 0, 2),))
        assert iou(a, b) == 0.0

    def test_offset_blocks(self):
        # 2x2 at (0,0) vs 2x2 at (1,1): intersection 1, union 7
        a = Mask.from_runs(4, 4, [(0, 0, 2), (1, 0, 2)])
        b = Mask.from_runs(4, 4, [(1, 1, 2), (2, 1, 2)])
        assert iou(a, b) == pytest.approx(1 / 7)
        assert iou(a, b) == iou_bitmap(a, b)

    def test_both_empty_is_zero(self):
        assert iou(Mask.empty(4, 4), Mask.empty(4, 4)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            iou(Mask.empty(4, 4), Mask.empty(5, 4))

    def test_matches_bitmap_oracle_and_symmetric(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a, b = random_mask(rng), random_mask(rng)
            assert iou(a, b) == iou_bitmap(a, b)
            assert iou(a, b) == iou(b, a)
            assert 0.0 <= iou(a, b) <= 1.0

    def test_intersection_matches_bitmap(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            a, b = random_mask(rng), random_mask(rng)
            expected = np.logical_and(rle_decode(a), rle_decode(b)).sum()
            assert intersection_area(a, b) == expected


class TestCentroid:
    def test_single_pixel(self):
        c = centroid(Mask(16, 16, ((7, 3, 1),)))  # pixel x=3, y=7
        assert (c.x, c.y) == (3.0, 7.0)

    def test_square_block(self):
        c = centroid(Mask.from_runs(4, 4, [(0, 0, 2), (1, 0, 2)]))
        assert (c.x, c.y) == (0.5, 0.5)

    def test_hand_mean(self):
        # pixels (x,y): (0,0),(1,0),(0,1),(0,2) -> mean x 0.25, mean y 0.75
        m = Mask.from_runs(4, 4, [(0, 0, 2), (1, 0, 1), (2, 0, 1)])
        c = centroid(m)
        assert (c.x, c.y) == (0.25, 0.75)

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            centroid(Mask.empty(4, 4))

    def test_matches_bitmap_mean(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            m = random_mask(rng)
            if area(m) == 0:
                continue
            ys, xs = np.nonzero(rle_decode(m))
            c = centroid(m)
            assert c.x == pytest.approx(xs.mean())
            assert c.y == pytest.approx(ys.mean())


class TestShift:
    def test_zero_is_identity(self):
        rng = np.random.default_rng(10)
        m = random_mask(rng)
        assert shift(m, 0, 0) == m

    def test_translate_pixel(self):
        m = Mask(8, 8, ((0, 0, 1),))
        assert shift(m, 2, 3).runs == ((3, 2, 1),)

    def test_clip_at_boundary(self):
        m = Mask(512, 512, ((0, 511, 1),))
        assert shift(m, 1, 0).runs == ()

    def test_centroid_translates_without_clipping(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            m = random_mask(rng, width=64, height=64, density=0.2)
            if area(m) == 0:
                continue
            box = bounding_box(m)
            dx = int(rng.integers(0, 64 - box[2]))  # keep every pixel on the grid
            dy = int(rng.integers(0, 64 - box[3]))
            moved = shift(m, dx, dy)
            c0, c1 = centroid(m), centroid(moved)
            assert c1.x == pytest.approx(c0.x + dx)
            assert c1.y == pytest.approx(c0.y + dy)

    def test_matches_bitmap_roll(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            m = random_mask(rng)
            dx, dy = int(rng.integers(-5, 6)), int(rng.integers(-5, 6))
            bm = rle_decode(m)
            out = np.zeros_like(bm)
            src = bm[max(0, -dy) : bm.shape[0] - max(0, dy), max(0, -dx) : bm.shape[1] - max(0, dx)]
            out[max(0, dy) : max(0, dy) + src.shape[0], max(0, dx) : max(0, dx) + src.shape[1]] = src
            assert np.array_equal(rle_decode(shift(m, dx, dy)), out)


class TestRle:
    def test_all_zero(self):
        assert rle_encode(np.zeros((3, 5))).runs == ()

    def test_full_row(self):
        bm = np.zeros((3, 5))
        bm[1] = 1
        assert rle_encode(bm).runs == ((1, 0, 5),)

    def test_round_trip_random(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            bm = rng.random((16, 16)) < rng.random()
            assert np.array_equal(rle_decode(rle_encode(bm)), bm)

    def test_canonical_runs_rejected(self):
        with pytest.raises(ValueError):
            Mask(4, 4, ((0, 0, 2), (0, 2, 1)))  # touching runs must be merged
        with pytest.raises(ValueError):
            Mask(4, 4, ((1, 0, 1), (0, 0, 1)))  # out of order
        with pytest.raises(ValueError):
            Mask(4, 4, ((0, 3, 2),))  # out of bounds

    def test_from_runs_merges(self):
        m = Mask.from_runs(8, 8, [(0, 2, 2), (0, 0, 2), (0, 3, 3)])
        assert m.runs == ((0, 0, 6),)


class TestEuclideanSimilarity:
    def test_identical(self):
        m = Mask(16, 16, ((4, 4, 3),))
        assert euclidean_similarity(m, m) == 1.0

    def test_clamped_at_zero(self):
        a = Mask(512, 512, ((0, 0, 1),))
        b = Mask(512, 512, ((0, 100, 1),))  # distance 100 = 2*d_max
        assert euclidean_similarity(a, b, d_max=50) == 0.0

    def test_half_distance(self):
        a = Mask(512, 512, ((0, 0, 1),))
        b = Mask(512, 512, ((0, 25, 1),))
        assert euclidean_similarity(a, b, d_max=50) == pytest.approx(0.5)

    def test_empty_gives_zero(self):
        m = Mask(16, 16, ((4, 4, 3),))
        assert euclidean_similarity(m, Mask.empty(16, 16)) == 0.0
        assert euclidean_similarity(Mask.empty(16, 16), m) == 0.0
