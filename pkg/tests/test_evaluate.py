import pytest

from tracklink.evaluate import Tally, evaluate, extract_links, filter_border_tracks, \
    match_frame, segmentation_f, tracking_f
from tracklink.geometry import Mask, iou
from tracklink.tracks import GlobalTrack, Recording, TrackEntry

W = H = 64


def square(x, y, size=3) -> Mask:
    return Mask.from_runs(W, H, [(y + dy, x, size) for dy in range(size)])


def row_mask(x0, length, y=5) -> Mask:
    return Mask.from_runs(W, H, [(y, x0, length)])


def track(track_id, frame_to_mask):
    return GlobalTrack(track_id, {f: TrackEntry(m) for f, m in frame_to_mask.items()})


class TestMatchFrame:
    def test_perfect(self):
        masks = [square(5, 5), square(20, 20), square(40, 40)]
        pairs = match_frame(masks, masks)
        assert pairs == [(0, 0), (1, 1), (2, 2)]

    def test_iou_below_half_rejected(self):
        pred = Mask.from_runs(W, H, [(5, 0, 4), (6, 0, 4)])  # 2x4 block
        gt = Mask.from_runs(W, H, [(5, 2, 3), (6, 2, 3)])    # 2x3 block, 4 px shared
        assert iou(pred, gt) == pytest.approx(0.4)
        assert match_frame([pred], [gt]) == []

    def test_two_preds_one_gt_higher_total_wins(self):
        gt = row_mask(0, 20)
        p1 = row_mask(0, 12)   # IOU 12/20 = 0.6
        p2 = row_mask(8, 11)   # IOU 11/20 = 0.55
        assert iou(p1, gt) == pytest.approx(0.6)
        assert iou(p2, gt) == pytest.approx(0.55)
        assert match_frame([p1, p2], [gt]) == [(0, 0)]

    def test_empty_sides(self):
        assert match_frame([], [square(1, 1)]) == []
        assert match_frame([square(1, 1)], []) == []


class TestSegmentationF:
    def test_identical(self):
        tracks = [track(0, {f: square(5 + f, 5) for f in range(4)})]
        tally = segmentation_f(tracks, tracks)
        assert (tally.tp, tally.fp, tally.fn) == (4, 0, 0)
        assert tally.f == 1.0

    def test_empty_prediction(self):
        gt = [track(0, {0: square(5, 5)})]
        tally = segmentation_f([], gt)
        assert (tally.tp, tally.fp, tally.fn) == (0, 0, 1)
        assert tally.f == 0.0

    def test_one_of_ten_missed(self):
        gt = [track(0, {f: square(4 * f, 10) for f in range(10)})]
        pred = [track(0, {f: square(4 * f, 10) for f in range(9)})]
        tally = segmentation_f(pred, gt)
        assert (tally.tp, tally.fp, tally.fn) == (9, 0, 1)
        assert tally.precision == 1.0
        assert tally.recall == pytest.approx(0.9)
        assert tally.f == pytest.approx(18 / 19)


class TestExtractLinks:
    def test_contiguous(self):
        links = extract_links([track(0, {f: square(5, 5) for f in range(5)})])
        assert [(l.frame_a, l.frame_b) for l in links] == [(0, 1), (1, 2), (2, 3), (3, 4)]

    def test_single_frame(self):
        assert extract_links([track(0, {3: square(5, 5)})]) == []

    def test_gap_spanning(self):
        links = extract_links([track(0, {f: square(5, 5) for f in (1, 2, 4)})])
        assert [(l.frame_a, l.frame_b) for l in links] == [(1, 2), (2, 4)]


class TestTrackingF:
    def test_identical(self):
        tracks = [track(0, {f: square(5 + f, 5) for f in range(5)}),
                  track(1, {f: square(30, 30 + f) for f in range(5)})]
        tally = tracking_f(tracks, tracks)
        assert (tally.tp, tally.fp, tally.fn) == (8, 0, 0)
        assert tally.f == 1.0

    def test_id_switch_fixture(self):
        # 5-frame gt; prediction splits it: A covers frames 1-3, B covers 4-5
        gt = [track(0, {f: square(5 + f, 5) for f in range(1, 6)})]
        pred = [track(10, {f: square(5 + f, 5) for f in (1, 2, 3)}),
                track(11, {f: square(5 + f, 5) for f in (4, 5)})]
        tally = tracking_f(pred, gt)
        assert (tally.tp, tally.fp, tally.fn) == (3, 0, 1)
        assert tally.precision == 1.0
        assert tally.recall == pytest.approx(0.75)
        assert tally.f == pytest.approx(6 / 7)

    def test_swapped_ids_two_fp_two_fn(self):
        a = {f: square(5, 5 + 4 * f) for f in range(3)}
        b = {f: square(40, 5 + 4 * f) for f in range(3)}
        gt = [track(0, a), track(1, b)]
        pred = [track(10, {0: a[0], 1: a[1], 2: b[2]}),
                track(11, {0: b[0], 1: b[1], 2: a[2]})]
        tally = tracking_f(pred, gt)
        assert (tally.tp, tally.fp, tally.fn) == (2, 2, 2)

    def test_swap_of_pred_and_gt_swaps_precision_recall(self):
        gt = [track(0, {f: square(5 + f, 5) for f in range(1, 6)})]
        pred = [track(10, {f: square(5 + f, 5) for f in (1, 2, 3)}),
                track(11, {f: square(5 + f, 5) for f in (4, 5)})]
        fwd = tracking_f(pred, gt)
        rev = tracking_f(gt, pred)
        assert fwd.precision == rev.recall
        assert fwd.recall == rev.precision
        assert fwd.f == rev.f

    def test_removing_fp_only_tracks_helps_precision_keeps_recall(self):
        gt = [track(0, {f: square(5 + f, 5) for f in range(4)})]
        junk = track(99, {f: square(50, 50) for f in range(4)})
        pred_with = [track(0, {f: square(5 + f, 5) for f in range(4)}), junk]
        pred_without = pred_with[:1]
        with_junk = tracking_f(pred_with, gt)
        without = tracking_f(pred_without, gt)
        assert without.recall == with_junk.recall
        assert without.precision >= with_junk.precision


class TestEvaluate:
    def test_report_shape(self):
        tracks = [track(0, {f: square(5 + f, 5) for f in range(3)})]
        report = evaluate(tracks, tracks)
        d = report.as_dict()
        assert d["seg"]["f"] == 1.0 and d["trk"]["f"] == 1.0
        assert set(d["seg"]) == {"tp", "fp", "fn", "precision", "recall", "f"}

    def test_f_zero_when_both_empty(self):
        assert Tally(0, 0, 0).f == 0.0


class TestBorderFilter:
    REC = Recording(64, 64, 10)

    def test_interior_track_kept(self):
        t = track(0, {f: square(20, 20) for f in range(10)})
        assert filter_border_tracks([t], self.REC) == [t]

    def test_exiting_track_removed(self):
        # drifts to the right edge and ends early
        t = track(0, {f: square(40 + 7 * f, 20) for f in range(4)})
        assert t.entries[3].mask.runs[0][1] + 3 >= 62  # final bbox in the band
        assert filter_border_tracks([t], self.REC) == []

    def test_touching_midlife_but_persisting_kept(self):
        masks = {f: square(60, 20) for f in range(10)}  # touches the band throughout
        t = track(0, masks)
        assert filter_border_tracks([t], self.REC) == [t]

    def test_early_end_in_interior_kept(self):
        t = track(0, {f: square(20, 20) for f in range(4)})
        assert filter_border_tracks([t], self.REC) == [t]

    def test_margin_zero_disables(self):
        t = track(0, {f: square(61, 20) for f in range(4)})
        assert filter_border_tracks([t], self.REC, margin_px=0) == [t]
        assert filter_border_tracks([t], self.REC, margin_px=2) == []
