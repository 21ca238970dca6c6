import numpy as np
import pydantic
import pytest

from gridpeak.optimize import GlobalBest, Particle, SwarmConfig, pso_update, run_swarm


class HalfRng:
    """Stands in for a generator, always drawing 0.5."""

    def random(self, size):
        return np.full(size, 0.5)


def sphere(position):
    return float(np.sum((position - 0.3) ** 2))


class TestSwarmConfig:
    def test_defaults(self):
        # Act
        config = SwarmConfig()

        # Assert
        assert config.particle_count == 40
        assert config.max_iterations == 100
        assert (config.cognitive, config.social) == (2.0, 2.0)
        assert config.penalty_weight is None

    @pytest.mark.parametrize(
        "changes",
        [
            {"particle_count": 1},
            {"max_iterations": 0},
            {"inertia": 1.5},
            {"velocity_clamp": 0},
            {"workers": 0},
            {"swarm_size": 10},
        ],
    )
    def test_invalid(self, changes):
        # Act & Assert
        with pytest.raises(pydantic.ValidationError):
            SwarmConfig(**changes)

    def test_inertia_decay(self):
        # Arrange
        config = SwarmConfig(max_iterations=11)

        # Act
        weights = [config.inertia_at(i) for i in range(1, 12)]

        # Assert
        assert weights[0] == pytest.approx(0.9)
        assert weights[5] == pytest.approx(0.65)
        assert weights[-1] == pytest.approx(0.4)

    def test_inertia_single_iteration(self):
        # Arrange
        config = SwarmConfig(max_iterations=1)

        # Act
        weight = config.inertia_at(1)

        # Assert
        assert weight == 0.9


class TestPsoUpdate:
    # Arrange
    @pytest.fixture
    def particle(self):
        return Particle(
            position=np.array([0.0]),
            velocity=np.array([1.0]),
            pbest_position=np.array([2.0]),
            pbest_cost=1.0,
        )

    # Arrange
    @pytest.fixture
    def gbest(self):
        return GlobalBest(position=np.array([4.0]), cost=0.5)

    def test_update(self, particle, gbest):
        # Arrange
        config = SwarmConfig(inertia=0.5)

        # Act
        moved = pso_update(
            particle, gbest, config, HalfRng(), np.array([-100.0]), np.array([100.0])
        )

        # Assert
        np.testing.assert_allclose(moved.velocity, [6.5])
        np.testing.assert_allclose(moved.position, [6.5])
        assert moved.pbest_cost == 1.0
        np.testing.assert_array_equal(moved.pbest_position, [2.0])

    def test_inertia_argument(self, particle, gbest):
        # Arrange
        config = SwarmConfig(inertia=0.9)

        # Act
        moved = pso_update(
            particle,
            gbest,
            config,
            HalfRng(),
            np.array([-100.0]),
            np.array([100.0]),
            inertia=0.0,
        )

        # Assert
        np.testing.assert_allclose(moved.velocity, [6.0])

    def test_velocity_clamp(self, particle, gbest):
        # Arrange
        config = SwarmConfig(inertia=0.5, velocity_clamp=0.01)

        # Act
        moved = pso_update(
            particle, gbest, config, HalfRng(), np.array([-100.0]), np.array([100.0])
        )

        # Assert
        np.testing.assert_allclose(moved.velocity, [2.0])
        np.testing.assert_allclose(moved.position, [2.0])

    def test_position_clamp(self, particle, gbest):
        # Arrange
        config = SwarmConfig(inertia=0.5, velocity_clamp=1.0)

        # Act
        moved = pso_update(
            particle, gbest, config, HalfRng(), np.array([-5.0]), np.array([5.0])
        )

        # Assert
        np.testing.assert_allclose(moved.position, [5.0])


class TestRunSwarm:
    def test_sphere(self):
        # Arrange
        config = SwarmConfig(particle_count=20, max_iterations=80, seed=1)

        # Act
        gbest, trace = run_swarm(sphere, np.zeros(3), np.ones(3), config)

        # Assert
        assert gbest.cost < 1e-4
        np.testing.assert_allclose(gbest.position, [0.3, 0.3, 0.3], atol=0.01)
        assert len(trace) == 81
        assert trace.final == gbest.cost

    def test_trace_nonincreasing(self, small_swarm):
        # Act
        _, trace = run_swarm(sphere, np.zeros(4), np.ones(4), small_swarm)

        # Assert
        assert all(np.diff(trace.costs) <= 0)

    def test_reproducible(self, small_swarm):
        # Act
        gbest_1, trace_1 = run_swarm(sphere, np.zeros(2), np.ones(2), small_swarm)
        gbest_2, trace_2 = run_swarm(sphere, np.zeros(2), np.ones(2), small_swarm)

        # Assert
        np.testing.assert_array_equal(gbest_1.position, gbest_2.position)
        assert trace_1 == trace_2

    def test_workers_do_not_change_result(self, small_swarm):
        # Arrange
        threaded = small_swarm.model_copy(update={"workers": 4})

        # Act
        serial, _ = run_swarm(sphere, np.zeros(3), np.ones(3), small_swarm)
        parallel, _ = run_swarm(sphere, np.zeros(3), np.ones(3), threaded)

        # Assert
        np.testing.assert_array_equal(serial.position, parallel.position)
        assert serial.cost == parallel.cost

    def test_streams_differ(self, small_swarm):
        # Act
        first, _ = run_swarm(sphere, np.zeros(2), np.ones(2), small_swarm, stream=17)
        second, _ = run_swarm(sphere, np.zeros(2), np.ones(2), small_swarm, stream=18)

        # Assert
        assert not np.array_equal(first.position, second.position)

    def test_anchor(self, small_swarm):
        # Act
        gbest, trace = run_swarm(
            sphere, np.zeros(2), np.ones(2), small_swarm, anchors=[np.full(2, 0.3)]
        )

        # Assert
        assert trace.costs[0] == 0
        assert gbest.index == 0
        np.testing.assert_allclose(gbest.position, [0.3, 0.3])

    def test_anchor_clipped(self, small_swarm):
        # Arrange
        seen = []

        def objective(position):
            seen.append(position.copy())
            return sphere(position)

        # Act
        run_swarm(objective, np.zeros(2), np.ones(2), small_swarm, anchors=[[2, -1]])

        # Assert
        np.testing.assert_array_equal(seen[0], [1.0, 0.0])

    def test_stays_in_box(self, small_swarm):
        # Arrange
        seen = []

        def objective(position):
            seen.append(position.copy())
            return -float(np.sum(position))

        # Act
        run_swarm(objective, np.array([0.0, -1.0]), np.array([1.0, 2.0]), small_swarm)

        # Assert
        positions = np.array(seen)
        assert np.all(positions >= [0.0, -1.0])
        assert np.all(positions <= [1.0, 2.0])

    def test_invalid_bounds(self, small_swarm):
        # Act & Assert
        with pytest.raises(ValueError, match="lower <= upper"):
            run_swarm(sphere, np.ones(2), np.zeros(2), small_swarm)
