from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class ConeReport:
    """Outcome of a cone membership test or a sampling probe.

    ``margin`` is a distance-to-violation proxy; ``is_member`` agrees with
    ``margin >= 0`` up to the tolerance of the test that produced it.
    """
    is_member: bool
    margin: float
    witness: Optional[Any] = None
    checked: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        witness = self.witness
        if hasattr(witness, "tolist"):
            witness = witness.tolist()
        return {
            "is_member": bool(self.is_member),
            "margin": float(self.margin),
            "witness": witness,
            "checked": int(self.checked),
            **self.details,
        }
