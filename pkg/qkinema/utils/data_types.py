from typing import Any, Dict

import numpy as np

from ..core.classical import ClassicalDistribution, PointMap
from ..core.dynamics import AffinityReport
from ..core.errors import ValidationError
from ..core.kinematics import DensityOperator, Ensemble, EnsembleKind
from ..core.measurement import Povm
from ..core.operator_core import as_cmatrix
from ..core.projection_signaling import SignalingVerdict


class DataConverter:
    """Centralized data type conversion utilities"""

    @staticmethod
    def convert_numpy_types(data: Any) -> Any:
        """Convert numpy types to Python native types"""
        if isinstance(data, np.integer):
            return int(data)
        elif isinstance(data, np.floating):
            return float(data)
        elif isinstance(data, (complex, np.complexfloating)):
            return [float(data.real), float(data.imag)]
        elif isinstance(data, np.bool_):
            return bool(data)
        elif isinstance(data, np.ndarray):
            return DataConverter.convert_numpy_types(data.tolist())
        elif isinstance(data, dict):
            return {k: DataConverter.convert_numpy_types(v) for k, v in data.items()}
        elif isinstance(data, (list, tuple)):
            return [DataConverter.convert_numpy_types(item) for item in data]
        else:
            return data

    # ================================================================
    # 🔢 Matrices: {"rows": r, "cols": c, "data": [[re, im], ...]}
    # ================================================================

    @staticmethod
    def matrix_to_json(matrix: Any) -> Dict:
        m = np.asarray(getattr(matrix, "matrix", matrix), dtype=np.complex128)
        flat = m.reshape(-1)
        return {
            "rows": int(m.shape[0]),
            "cols": int(m.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat],
        }

    @staticmethod
    def matrix_from_json(payload: Dict) -> np.ndarray:
        try:
            rows, cols = int(payload["rows"]), int(payload["cols"])
            data = [complex(re, im) for re, im in payload["data"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed matrix JSON: {e}") from e
        if len(data) != rows * cols:
            raise ValidationError(f"matrix JSON has {len(data)} entries for {rows}x{cols}")
        return as_cmatrix(np.array(data).reshape(rows, cols))

    # ================================================================
    # 📦 Ensembles and POVMs
    # ================================================================

    @staticmethod
    def ensemble_to_json(e: Ensemble) -> Dict:
        return {
            "kind": e.kind.value,
            "components": [
                {"weight": float(w), "state": DataConverter.matrix_to_json(s)} for w, s in e.components
            ],
        }

    @staticmethod
    def ensemble_from_json(payload: Dict) -> Ensemble:
        try:
            components = tuple(
                (float(c["weight"]), DensityOperator(DataConverter.matrix_from_json(c["state"])))
                for c in payload["components"]
            )
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed ensemble JSON: {e}") from e
        return Ensemble(components, EnsembleKind(payload.get("kind", EnsembleKind.GENUINE.value)))

    @staticmethod
    def povm_to_json(m: Povm) -> Dict:
        return {
            "name": m.name,
            "effects": [
                {"label": float(label), "operator": DataConverter.matrix_to_json(op)}
                for label, op in m.effects
            ],
        }

    @staticmethod
    def povm_from_json(payload: Dict) -> Povm:
        try:
            effects = tuple(
                (float(e["label"]), DataConverter.matrix_from_json(e["operator"]))
                for e in payload["effects"]
            )
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed POVM JSON: {e}") from e
        return Povm(effects, payload.get("name", "povm"))

    # ================================================================
    # 🎲 Classical phase space
    # ================================================================

    @staticmethod
    def distribution_to_json(pi: ClassicalDistribution) -> Dict:
        return {"size": int(pi.probs.size), "probs": pi.probs.tolist()}

    @staticmethod
    def distribution_from_json(payload: Dict) -> ClassicalDistribution:
        try:
            size, probs = int(payload["size"]), payload["probs"]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed distribution JSON: {e}") from e
        if len(probs) != size:
            raise ValidationError(f"distribution JSON declares size {size} but has {len(probs)} entries")
        return ClassicalDistribution(probs)

    @staticmethod
    def point_map_to_json(f: PointMap) -> Dict:
        return {"table": f.table.tolist()}

    @staticmethod
    def point_map_from_json(payload: Dict) -> PointMap:
        try:
            return PointMap(payload["table"])
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed point map JSON: {e}") from e

    # ================================================================
    # 📋 Reports
    # ================================================================

    @staticmethod
    def affinity_report_to_json(report: AffinityReport) -> Dict:
        witness = None
        if report.witness is not None:
            witness = {
                "e1": DataConverter.ensemble_to_json(report.witness.e1),
                "e2": DataConverter.ensemble_to_json(report.witness.e2),
                "deviation": float(report.witness.deviation),
            }
        return {"verdict": report.verdict.value, "trials": int(report.trials), "witness": witness}

    @staticmethod
    def verdict_to_json(verdict: SignalingVerdict) -> Dict:
        return {
            "theory": verdict.theory.value,
            "signaling": bool(verdict.signaling),
            "channel_gap": float(verdict.channel_gap),
            "detail": verdict.detail,
            "evidence": DataConverter.convert_numpy_types(dict(verdict.evidence)),
        }

    @staticmethod
    def sanitize_report(report: Dict) -> Dict:
        """Make a report JSON-serializable"""
        return DataConverter.convert_numpy_types(report)
