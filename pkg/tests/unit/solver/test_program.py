"""
Unit tests for the log-convex program representation.

Tests cover LogAffine and LseConstraint validation, short-circuited
constraints, compilation to dense arrays and the debug dump.
"""

import numpy as np
import pytest

from src.hetnet_power.solver import (
    LogAffine,
    LogConvexProgram,
    LseConstraint,
    SolverOptions,
    VariableInfo,
    evaluate_constraint,
)


def _budget_program(offset=None):
    """minimize 1/(x y) subject to x + y <= 1, in log variables"""
    return LogConvexProgram(
        num_vars=2,
        objective_terms=[LogAffine({0: -1.0, 1: -1.0})],
        constraints=[
            LseConstraint(
                (LogAffine({0: 1.0}), LogAffine({1: 1.0})), 0.0, offset=offset, name="budget"
            )
        ],
        variables=[VariableInfo("x", "power"), VariableInfo("y", "power")],
        start=np.array([-1.0, -1.0]),
    )


class TestLogAffine:
    """Tests for LogAffine."""

    def test_evaluate(self):
        """Test c + a . y."""
        term = LogAffine({0: 2.0, 2: -1.0}, 0.5)

        assert term.evaluate(np.array([1.0, 9.0, 3.0])) == pytest.approx(-0.5)
        assert term.max_index == 2

    def test_shifted(self):
        """Test shifting the constant."""
        term = LogAffine({1: 1.0}, 1.0).shifted(-3.0)

        assert term.constant == -2.0
        assert term.coeffs == {1: 1.0}

    def test_rejects_negative_index(self):
        """Test that variable indices must be non-negative."""
        with pytest.raises(ValueError):
            LogAffine({-1: 1.0})

    def test_rejects_infinite_constant(self):
        """Test that constants must be finite."""
        with pytest.raises(ValueError):
            LogAffine({0: 1.0}, np.inf)


class TestLseConstraint:
    """Tests for LseConstraint."""

    def test_requires_terms(self):
        """Test that a constraint needs at least one term."""
        with pytest.raises(ValueError):
            LseConstraint((), 0.0)

    def test_short_circuit_on_large_constant_offset(self):
        """Test that a large constant offset deactivates the constraint."""
        loose = LseConstraint((LogAffine({0: 1.0}),), 0.0, offset=LogAffine({}, 2e4))
        affine = LseConstraint((LogAffine({0: 1.0}),), 0.0, offset=LogAffine({1: 1.0}, 2e4))

        assert loose.is_short_circuited
        assert not affine.is_short_circuited

    def test_evaluate_constraint_with_offset(self):
        """Test the residual with an affine offset."""
        con = LseConstraint(
            (LogAffine({0: 1.0}), LogAffine({0: 1.0})), 1.0, offset=LogAffine({1: 2.0}, 0.5)
        )

        residual = evaluate_constraint(con, [0.0, 1.0])

        assert residual == pytest.approx(np.log(2.0) - 1.0 - 2.5)

    def test_evaluate_constraint_with_extreme_exponents(self):
        """Test that exponents beyond the float range keep the residual finite."""
        con = LseConstraint((LogAffine({0: 1.0}), LogAffine({0: -1.0})), 0.0)

        assert evaluate_constraint(con, [800.0]) == pytest.approx(800.0)
        assert evaluate_constraint(con, [-800.0]) == pytest.approx(800.0)
        assert evaluate_constraint(con, [0.0]) == pytest.approx(np.log(2.0))


class TestLogConvexProgram:
    """Tests for LogConvexProgram."""

    def test_rejects_out_of_range_index(self):
        """Test that every index must address a declared variable."""
        with pytest.raises(ValueError, match="out of range"):
            LogConvexProgram(
                num_vars=1,
                objective_terms=[LogAffine({0: 1.0})],
                constraints=[LseConstraint((LogAffine({3: 1.0}),), 0.0)],
            )

    def test_rejects_empty_objective(self):
        """Test that an objective term is required."""
        with pytest.raises(ValueError):
            LogConvexProgram(num_vars=1, objective_terms=[], constraints=[])

    def test_variable_lookup(self):
        """Test variable metadata helpers."""
        program = _budget_program()

        assert program.variable_index("y") == 1
        assert program.indices_with_role("power") == [0, 1]
        with pytest.raises(KeyError):
            program.variable_index("z")

    def test_compiled_residuals_match_direct_evaluation(self):
        """Test that compiled arrays reproduce the per-constraint residuals."""
        program = _budget_program(offset=LogAffine({0: 0.5}, 0.1))
        y = np.array([-0.7, -1.3])

        compiled = program.compile()

        assert compiled.residuals(y)[0] == pytest.approx(
            evaluate_constraint(program.constraints[0], y), abs=1e-14
        )
        assert compiled.objective(y) == pytest.approx(np.exp(2.0))

    def test_compile_drops_short_circuited(self):
        """Test that short-circuited constraints are not compiled."""
        program = _budget_program()
        program.constraints.append(
            LseConstraint((LogAffine({0: 1.0}),), 0.0, offset=LogAffine({}, 1e5), name="off")
        )

        compiled = program.compile()

        assert compiled.num_constraints == 1
        assert compiled.active.tolist() == [0]

    def test_residual_gradient_matches_finite_differences(self):
        """Test the gradient rows returned by residual_derivatives."""
        program = _budget_program(offset=LogAffine({1: 0.3}, 0.0))
        compiled = program.compile()
        y = np.array([-0.4, -0.9])

        _, _, _, rows = compiled.residual_derivatives(y)
        h = 1e-7
        numeric = [
            (compiled.residuals(y + h * e)[0] - compiled.residuals(y - h * e)[0]) / (2 * h)
            for e in np.eye(2)
        ]

        assert rows[0] == pytest.approx(numeric, abs=1e-6)

    def test_debug_json(self):
        """Test the plain-dict dump."""
        dump = _budget_program().to_debug_json()

        assert dump["num_vars"] == 2
        assert dump["constraints"][0]["name"] == "budget"
        assert dump["constraints"][0]["terms"][1]["coeffs"] == {"1": 1.0}
        assert dump["variables"][0] == {"name": "x", "role": "power"}


class TestSolverOptions:
    """Tests for SolverOptions."""

    def test_defaults(self):
        """Test the documented defaults."""
        opts = SolverOptions()

        assert opts.tol == 1e-8
        assert opts.max_newton_iters == 200
        assert opts.barrier_growth == 10.0
        assert opts.alpha == 0.25
        assert opts.beta == 0.5

    @pytest.mark.parametrize(
        "field,value",
        [("barrier_growth", 1.0), ("tol", 0.0), ("alpha", 0.6), ("beta", 1.0), ("max_newton_iters", 0)],
    )
    def test_rejects_invalid(self, field, value):
        """Test option validation."""
        with pytest.raises(ValueError):
            SolverOptions(**{field: value})
