"""Adaptive disaster interpretation: agent orchestration and evaluation."""

__version__ = "0.1.0"

from .categories import CategoryInfo, category_lookup
from .executor import ExecutionTrace, ResourceStore, ToolConfig, execute_plan, resolve_input
from .harness import EvalReport, run_benchmark
from .metrics import detection_ap50, mask_miou, match_answer, plan_metrics
from .planning import (
    Action,
    Plan,
    PlannerConfig,
    build_plan_prompt,
    canonical_tool_sequence,
    extract_trailing_json,
    generate_plan,
    rule_based_plan,
    validate_and_repair_plan,
)
from .scene import DetectionSet, MaskSet, Scene, load_scene, validate_scene, write_scene
from .synth import SynthParams, gen_requests, synth_dataset, synth_ground_truth, synth_scene
from .tools import (
    build_registry,
    compute_area,
    count_objects,
    find_path,
    run_detection,
    run_segmentation,
    summarize,
)

__all__ = [
    "Action",
    "CategoryInfo",
    "DetectionSet",
    "EvalReport",
    "ExecutionTrace",
    "MaskSet",
    "Plan",
    "PlannerConfig",
    "ResourceStore",
    "Scene",
    "SynthParams",
    "ToolConfig",
    "build_plan_prompt",
    "build_registry",
    "canonical_tool_sequence",
    "category_lookup",
    "compute_area",
    "count_objects",
    "detection_ap50",
    "execute_plan",
    "extract_trailing_json",
    "find_path",
    "gen_requests",
    "generate_plan",
    "load_scene",
    "mask_miou",
    "match_answer",
    "plan_metrics",
    "resolve_input",
    "rule_based_plan",
    "run_benchmark",
    "run_detection",
    "run_segmentation",
    "summarize",
    "synth_dataset",
    "synth_ground_truth",
    "synth_scene",
    "validate_and_repair_plan",
    "validate_scene",
    "write_scene",
]
