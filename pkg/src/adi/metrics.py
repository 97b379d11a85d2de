"""Planning, recognition, and perception metrics.

Planning quality is valid rate plus precision/recall over tool presence
(set semantics, duplicates and order ignored). Answers are matched
strictly, except areas which tolerate < 1 m^2 absolute or < 2 % relative
error. Perception uses mean per-category IoU for masks and all-point
interpolated average precision at IoU >= 0.5 for detections.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import requests_io as rq
from .errors import DimensionMismatch, IdMismatch
from .llm import LlmBackend
from .scene import DetectionSet, MaskSet

AREA_ABS_TOL = 1.0  # square meters
AREA_REL_TOL = 0.02
_REL_EPS = 1e-9  # guards gt = 0 in the relative rule

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_YESNO_RE = re.compile(r"\b(yes|no)\b", re.IGNORECASE)


@dataclass
class PlanMetrics:
    total: int = 0
    valid_count: int = 0
    correct_actions: int = 0
    unnecessary_actions: int = 0
    missing_actions: int = 0

    @property
    def valid_rate(self) -> float:
        return self.valid_count / self.total if self.total else 0.0

    @property
    def precision(self) -> float | None:
        denom = self.correct_actions + self.unnecessary_actions
        return self.correct_actions / denom if denom else None

    @property
    def recall(self) -> float | None:
        denom = self.correct_actions + self.missing_actions
        return self.correct_actions / denom if denom else None


def plan_metrics(
    predictions: dict[str, list[str] | None], ground_truth: dict[str, list[str]]
) -> PlanMetrics:
    """Aggregate plan quality over requests aligned by id.

    A prediction of None is an invalid plan: it contributes all of its
    ground-truth actions as missing and nothing else. Valid plans compare
    tool presence as sets.
    """
    if set(predictions) != set(ground_truth):
        raise IdMismatch(
            f"prediction ids do not match ground truth ids: "
            f"{sorted(set(predictions) ^ set(ground_truth))[:5]}"
        )
    metrics = PlanMetrics(total=len(ground_truth))
    for request_id in ground_truth:
        gt = set(ground_truth[request_id])
        pred = predictions[request_id]
        if pred is None:
            metrics.missing_actions += len(gt)
            continue
        metrics.valid_count += 1
        pred_set = set(pred)
        metrics.correct_actions += len(pred_set & gt)
        metrics.unnecessary_actions += len(pred_set - gt)
        metrics.missing_actions += len(gt - pred_set)
    return metrics


def parse_first_number(text: str) -> float | None:
    m = _NUMBER_RE.search(text)
    return float(m.group()) if m else None


def parse_yes_no(text: str) -> bool | None:
    m = _YESNO_RE.search(text)
    return m.group().lower() == "yes" if m else None


def match_answer(pred: str | None, gt_answer, rtype: str) -> bool:
    """Strict answer match; unparseable predictions score incorrect."""
    if pred is None or gt_answer is None:
        return False
    if rtype in rq.AREA_TYPES:
        value = parse_first_number(pred)
        if value is None:
            return False
        gt = float(gt_answer)
        diff = abs(value - gt)
        return diff < AREA_ABS_TOL or diff / max(abs(gt), _REL_EPS) < AREA_REL_TOL
    if rtype in rq.COUNT_TYPES:
        value = parse_first_number(pred)
        return value is not None and value == int(gt_answer)
    if rtype in rq.EXISTENCE_TYPES or rtype == rq.RESCUE_PATH:
        verdict = parse_yes_no(pred)
        return verdict is not None and verdict == bool(gt_answer)
    return False


def build_judge_prompt(question: str, gt_answer: str, pred: str) -> str:
    return (
        "You are judging the correctness of an answer.\n"
        f"Question: {question}\n"
        f"Ground-truth answer: {gt_answer}\n"
        f"Predicted answer: {pred}\n"
        "Is the predicted answer correct? Reply with a single word: yes or no."
    )


def gpt_score(pred: str, gt_answer, question: str, judge: LlmBackend) -> bool:
    """LLM-judged correctness; raises BackendUnreachable when the judge is
    down (callers omit the metric and continue)."""
    reply = judge.complete(build_judge_prompt(question, str(gt_answer), pred), 0.0)
    verdict = parse_yes_no(reply)
    return bool(verdict)


def mask_miou(pred: MaskSet, gt: MaskSet) -> float | None:
    """Mean IoU over categories present in either mask set; None when no
    category is present in either."""
    if (pred.width, pred.height) != (gt.width, gt.height):
        raise DimensionMismatch(
            f"pred {pred.width}x{pred.height} vs gt {gt.width}x{gt.height}"
        )
    names = sorted(set(pred.masks) | set(gt.masks))
    if not names:
        return None
    empty = np.zeros((gt.height, gt.width), dtype=bool)
    ious = []
    for name in names:
        p = pred.masks.get(name, empty)
        g = gt.masks.get(name, empty)
        union = int(np.count_nonzero(p | g))
        inter = int(np.count_nonzero(p & g))
        ious.append(inter / union if union else 0.0)
    return float(np.mean(ious))


def _bbox_iou(a, b) -> float:
    ix1, iy1 = max(a[0], b[0]), max(a[1], b[1])
    ix2, iy2 = min(a[2], b[2]), min(a[3], b[3])
    iw, ih = max(0.0, ix2 - ix1), max(0.0, iy2 - iy1)
    inter = iw * ih
    if inter <= 0:
        return 0.0
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    return inter / (area_a + area_b - inter)


def _average_precision(tp_flags: list[bool], n_gt: int) -> float:
    """All-point interpolated AP from ranked true-positive flags."""
    if n_gt == 0:
        return 0.0
    recalls = [0.0]
    precisions = [1.0]
    tp = 0
    for rank, flag in enumerate(tp_flags, 1):
        tp += flag
        recalls.append(tp / n_gt)
        precisions.append(tp / rank)
    ap = 0.0
    for i in range(1, len(recalls)):
        dr = recalls[i] - recalls[i - 1]
        if dr > 0:
            ap += dr * max(precisions[i:])
    return ap


def detection_ap50(pred: DetectionSet, gt: DetectionSet, iou_threshold: float = 0.5) -> float:
    """Mean AP at IoU >= threshold over categories with at least one gt
    box. Predictions are ranked by score with a coordinate tie-break so
    reordering equal-score items cannot change the result."""
    gt_by_cat: dict[int, list] = {}
    for det in gt.items:
        gt_by_cat.setdefault(det.category_id, []).append(det.bbox)
    if not gt_by_cat:
        return 0.0
    pred_by_cat: dict[int, list] = {}
    for det in pred.items:
        pred_by_cat.setdefault(det.category_id, []).append((det.score, det.bbox))

    aps = []
    for cid, gt_boxes in sorted(gt_by_cat.items()):
        preds = sorted(pred_by_cat.get(cid, []), key=lambda s: (-s[0], s[1]))
        matched = [False] * len(gt_boxes)
        tp_flags = []
        for _score, box in preds:
            best_iou, best_j = 0.0, -1
            for j, gt_box in enumerate(gt_boxes):
                if matched[j]:
                    continue
                iou = _bbox_iou(box, gt_box)
                if iou > best_iou:
                    best_iou, best_j = iou, j
            if best_j >= 0 and best_iou >= iou_threshold:
                matched[best_j] = True
                tp_flags.append(True)
            else:
                tp_flags.append(False)
        aps.append(_average_precision(tp_flags, len(gt_boxes)))
    return float(np.mean(aps))
