"""qkinema: kinematics of quantum mechanics, affinity certification and no-signaling checks."""

__version__ = "1.0.0"
