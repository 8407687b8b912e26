"""Configuration settings for qkinema"""

import os
from typing import Dict, List

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Base configuration class with layer organization"""

    # ================================================================
    # 🌐 LAYER 1: System Basics
    # ================================================================

    VERSION = "1.0.0"
    DEBUG = os.getenv("DEBUG", "false").lower() == "true"

    # ================================================================
    # 📐 LAYER 2: Numerical Tolerances
    # ================================================================

    # ‖A − A†‖_max bound for Hermitian inputs
    HERM_TOL = float(os.getenv("QKINEMA_HERM_TOL", "1e-10"))
    # eigenvalue floor for positivity
    POSITIVITY_TOL = float(os.getenv("QKINEMA_POSITIVITY_TOL", "1e-9"))
    # max-entry distance for operator equality
    EQUALITY_TOL = float(os.getenv("QKINEMA_EQUALITY_TOL", "1e-10"))
    # |Tr − 1| and |Σ weights − 1|
    TRACE_TOL = float(os.getenv("QKINEMA_TRACE_TOL", "1e-10"))
    # branches with Tr(ρF_k) at or below this are dropped
    PROB_FLOOR = float(os.getenv("QKINEMA_PROB_FLOOR", "1e-12"))
    AFFINITY_THRESHOLD = float(os.getenv("QKINEMA_AFFINITY_THRESHOLD", "1e-8"))
    NO_SIGNALING_TOL = float(os.getenv("QKINEMA_NO_SIGNALING_TOL", "1e-9"))
    # two ensembles represent the same density operator
    EQUIVALENCE_TOL = float(os.getenv("QKINEMA_EQUIVALENCE_TOL", "1e-9"))
    # two preparations handed to the affinity check share a barycenter
    BARYCENTER_TOL = float(os.getenv("QKINEMA_BARYCENTER_TOL", "1e-9"))
    # |Σ_k p_k − 1| for trace-rule outputs
    PROB_SUM_TOL = float(os.getenv("QKINEMA_PROB_SUM_TOL", "1e-9"))

    # ================================================================
    # 🎲 LAYER 3: Run Defaults
    # ================================================================

    DEFAULT_SEED = int(os.getenv("QKINEMA_SEED", "0"))
    DEFAULT_TRIALS = int(os.getenv("QKINEMA_TRIALS", "1000"))
    MEASUREMENTS_PER_STATE = int(os.getenv("QKINEMA_MEASUREMENTS_PER_STATE", "10"))
    DEFAULT_SHOTS = int(os.getenv("QKINEMA_SHOTS", "16"))

    # ================================================================
    # 📝 LAYER 4: Logging
    # ================================================================

    LOG_LEVEL = os.getenv("QKINEMA_LOG_LEVEL", "DEBUG" if DEBUG else "WARNING").upper()
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # ================================================================
    # 🛡️ Validation Methods
    # ================================================================

    @classmethod
    def validate_config(cls) -> List[str]:
        """Validate configuration settings"""
        errors = []

        for name, value in cls.get_tolerances().items():
            if not value > 0:
                errors.append(f"{name} must be positive, got {value}")

        if cls.NO_SIGNALING_TOL < cls.EQUALITY_TOL:
            errors.append("NO_SIGNALING_TOL must not be tighter than EQUALITY_TOL")

        if cls.AFFINITY_THRESHOLD <= cls.TRACE_TOL:
            errors.append("AFFINITY_THRESHOLD must sit above float noise (TRACE_TOL)")

        if cls.DEFAULT_TRIALS < 1:
            errors.append("QKINEMA_TRIALS must be at least 1")

        if cls.MEASUREMENTS_PER_STATE < 1:
            errors.append("QKINEMA_MEASUREMENTS_PER_STATE must be at least 1")

        if cls.DEFAULT_SHOTS < 1:
            errors.append("QKINEMA_SHOTS must be at least 1")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Unknown QKINEMA_LOG_LEVEL: {cls.LOG_LEVEL}")

        return errors

    # ================================================================
    # 🔧 Helper Functions
    # ================================================================

    @classmethod
    def get_tolerances(cls) -> Dict[str, float]:
        """Get every numerical tolerance"""
        return {
            "HERM_TOL": cls.HERM_TOL,
            "POSITIVITY_TOL": cls.POSITIVITY_TOL,
            "EQUALITY_TOL": cls.EQUALITY_TOL,
            "TRACE_TOL": cls.TRACE_TOL,
            "PROB_FLOOR": cls.PROB_FLOOR,
            "AFFINITY_THRESHOLD": cls.AFFINITY_THRESHOLD,
            "NO_SIGNALING_TOL": cls.NO_SIGNALING_TOL,
            "EQUIVALENCE_TOL": cls.EQUIVALENCE_TOL,
            "BARYCENTER_TOL": cls.BARYCENTER_TOL,
            "PROB_SUM_TOL": cls.PROB_SUM_TOL,
        }

    @classmethod
    def get_run_defaults(cls) -> Dict[str, int]:
        """Get defaults for randomized runs"""
        return {
            "DEFAULT_SEED": cls.DEFAULT_SEED,
            "DEFAULT_TRIALS": cls.DEFAULT_TRIALS,
            "MEASUREMENTS_PER_STATE": cls.MEASUREMENTS_PER_STATE,
            "DEFAULT_SHOTS": cls.DEFAULT_SHOTS,
        }

    @classmethod
    def get_system_summary(cls) -> Dict:
        """Get summary for report headers"""
        return {
            "version": cls.VERSION,
            "debug": cls.DEBUG,
            "tolerances": cls.get_tolerances(),
            "run_defaults": cls.get_run_defaults(),
        }
