from .monitors import Alert, FlowDashboard, check_invariants

__all__ = ['Alert', 'FlowDashboard', 'check_invariants']
