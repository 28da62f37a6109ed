from .suites import SUITES, Suite, SuiteResult, run_suite, random_potential, suite_coefficients, suite_phase_spec

__all__ = ['SUITES', 'Suite', 'SuiteResult', 'run_suite', 'random_potential', 'suite_coefficients', 'suite_phase_spec']
