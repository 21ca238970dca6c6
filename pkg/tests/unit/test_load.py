import numpy as np
import pytest

from gridpeak.grid import Branch, Bus, BusKind, RadialNetwork
from gridpeak.load import (
    LoadTable,
    ZipCoefficients,
    ZipLoad,
    effective_injection,
    zip_active,
    zip_reactive,
)
from tests.conftest import flat_profile, make_load

MIXED = ZipCoefficients(cz_p=0.5, ci_p=0.3, cp_p=0.2, cz_q=0.6, ci_q=0.2, cp_q=0.2)


class TestZipCoefficients:
    def test_defaults_constant_power(self):
        # Act
        coefficients = ZipCoefficients()

        # Assert
        assert coefficients.p == (0.0, 0.0, 1.0)
        assert coefficients.q == (0.0, 0.0, 1.0)

    def test_constructors(self):
        # Assert
        assert ZipCoefficients.constant_impedance().p == (1.0, 0.0, 0.0)
        assert ZipCoefficients.constant_current().q == (0.0, 1.0, 0.0)
        assert ZipCoefficients.constant_power().p == (0.0, 0.0, 1.0)

    def test_sum_not_one(self):
        # Act & Assert
        with pytest.raises(ValueError, match="must sum to 1"):
            ZipCoefficients(cz_p=0.5, ci_p=0.3, cp_p=0.3)

    @pytest.mark.parametrize("value", [float("nan"), float("inf")])
    def test_not_finite(self, value):
        # Act & Assert
        with pytest.raises(ValueError, match="must be finite"):
            ZipCoefficients(cz_p=value, ci_p=0.0, cp_p=1.0)

    def test_not_finite_reactive(self):
        # Act & Assert
        with pytest.raises(ValueError, match="reactive ZIP coefficients"):
            ZipCoefficients(cz_q=float("nan"))

    def test_out_of_bounds(self):
        # Act & Assert
        with pytest.raises(ValueError, match="must lie within"):
            ZipCoefficients(cz_p=3.0, ci_p=-1.0, cp_p=-1.0)

    def test_negative_within_bounds(self):
        # Act
        coefficients = ZipCoefficients(cz_p=1.5, ci_p=-0.8, cp_p=0.3)

        # Assert
        assert sum(coefficients.p) == pytest.approx(1.0)


class TestZipLoad:
    def test_profile_length(self):
        # Act & Assert
        with pytest.raises(ValueError, match="24 hourly values"):
            ZipLoad(bus=2, baseline_p=(1.0,) * 23, baseline_q=(0.0,) * 24)

    def test_negative_power(self):
        # Act & Assert
        with pytest.raises(ValueError, match="negative baseline"):
            ZipLoad(bus=2, baseline_p=(-1.0,) * 24, baseline_q=(0.0,) * 24)

    def test_ref_voltage_range(self):
        # Act & Assert
        with pytest.raises(ValueError, match="reference voltage"):
            ZipLoad(
                bus=2,
                baseline_p=flat_profile(1),
                baseline_q=flat_profile(0),
                ref_voltage=1.2,
            )

    def test_negative_penalty(self):
        # Act & Assert
        with pytest.raises(ValueError, match="negative penalty"):
            make_load(2, 100, 10, penalty_price=-1)


class TestZipEvaluation:
    def test_constant_power(self):
        # Arrange
        load = make_load(2, 100, 30)

        # Act
        p = zip_active(load, 0, 0.92)

        # Assert
        assert p == pytest.approx(100)

    def test_constant_impedance(self):
        # Arrange
        load = make_load(2, 100, 30, ZipCoefficients.constant_impedance())

        # Act
        p = zip_active(load, 0, 0.95)
        q = zip_reactive(load, 0, 0.95)

        # Assert
        assert p == pytest.approx(90.25)
        assert q == pytest.approx(30 * 0.9025)

    def test_ref_voltage(self):
        # Arrange
        load = ZipLoad(
            bus=2,
            baseline_p=flat_profile(100),
            baseline_q=flat_profile(0),
            ref_voltage=0.95,
            coefficients=ZipCoefficients.constant_current(),
        )

        # Act
        p = zip_active(load, 0, 0.95)

        # Assert
        assert p == pytest.approx(100)

    def test_all_coefficients_at_reference(self):
        # Arrange
        load = make_load(2, 100, 30, MIXED)

        # Act
        p = zip_active(load, 0, 1.0)

        # Assert
        assert p == pytest.approx(100)

    @pytest.mark.parametrize("v", [0.0, -0.5])
    def test_non_positive_voltage(self, v):
        # Arrange
        load = make_load(2, 100, 30)

        # Act & Assert
        with pytest.raises(ValueError, match="positive"):
            zip_active(load, 0, v)

    @pytest.mark.parametrize("hour", [-1, 24])
    def test_hour_out_of_range(self, hour):
        # Arrange
        load = make_load(2, 100, 30)

        # Act & Assert
        with pytest.raises(ValueError, match="Hour must be within"):
            zip_active(load, hour, 1.0)

        with pytest.raises(ValueError, match="Hour must be within"):
            zip_reactive(load, hour, 1.0)

        with pytest.raises(ValueError, match="Hour must be within"):
            effective_injection(load, hour, 1.0, 0.0)

    def test_monotone_in_voltage(self):
        # Arrange
        load = make_load(2, 100, 30, MIXED)
        voltages = np.linspace(0.85, 1.1, 26)

        # Act
        powers = [zip_active(load, 0, v) for v in voltages]

        # Assert
        assert all(np.diff(powers) >= 0)

    def test_homogeneous(self):
        # Arrange
        load = make_load(2, 100, 30, MIXED)
        double = make_load(2, 200, 60, MIXED)

        # Act & Assert
        for v in (0.9, 0.97, 1.04):
            assert zip_active(double, 0, v) == pytest.approx(2 * zip_active(load, 0, v))

    def test_effective_injection(self):
        # Arrange
        load = make_load(2, 100, 30, MIXED)

        # Act
        p, q = effective_injection(load, 0, 0.95, 0.25)

        # Assert
        assert p == pytest.approx(0.75 * zip_active(load, 0, 0.95))
        assert q == pytest.approx(0.75 * zip_reactive(load, 0, 0.95))

    def test_effective_injection_full_curtailment(self):
        # Arrange
        load = make_load(2, 100, 30)

        # Act
        p, q = effective_injection(load, 0, 1.0, 1.0)

        # Assert
        assert (p, q) == (0.0, 0.0)

    @pytest.mark.parametrize("chi", [-0.1, 1.1])
    def test_effective_injection_invalid_chi(self, chi):
        # Arrange
        load = make_load(2, 100, 30)

        # Act & Assert
        with pytest.raises(ValueError, match="Curtailment fraction"):
            effective_injection(load, 0, 1.0, chi)


class TestLoadTable:
    @pytest.fixture
    def network(self):
        return RadialNetwork(
            buses=(
                Bus(id=1, kind=BusKind.SUBSTATION),
                Bus(id=2),
                Bus(id=3),
            ),
            branches=(
                Branch(id=1, from_bus=1, to_bus=2, impedance=0.01 + 0.02j),
                Branch(id=2, from_bus=2, to_bus=3, impedance=0.01 + 0.01j),
            ),
        )

    @pytest.fixture
    def table(self, network):
        return LoadTable.from_loads(
            [
                make_load(2, 100, 30, MIXED),
                make_load(3, 200, 50, curtailable=True, penalty_price=2.0),
                make_load(3, 50, 10, ZipCoefficients.constant_impedance()),
            ],
            network,
        )

    def test_from_loads(self, table):
        # Assert
        assert len(table) == 3
        np.testing.assert_array_equal(table.columns, [0, 1, 1])
        assert table.p0.shape == (3, 24)
        assert table.curtailable_buses == (3,)

    def test_unknown_bus(self, network):
        # Act & Assert
        with pytest.raises(ValueError, match="not connected to a load node"):
            LoadTable.from_loads([make_load(7, 100, 30)], network)

    def test_substation_bus(self, network):
        # Act & Assert
        with pytest.raises(ValueError, match="not connected to a load node"):
            LoadTable.from_loads([make_load(1, 100, 30)], network)

    def test_injections_match_scalar(self, table):
        # Arrange
        vmag = np.array([0.97, 0.93])
        chi = np.array([0.0, 0.4, 0.0])

        # Act
        p, q = table.injections(0, vmag, chi)

        # Assert
        for i, load in enumerate(table.loads):
            v = vmag[table.columns[i]]
            assert p[i] == pytest.approx(effective_injection(load, 0, v, chi[i])[0])
            assert q[i] == pytest.approx(effective_injection(load, 0, v, chi[i])[1])

    def test_bus_power_aggregates(self, table):
        # Arrange
        vmag = np.array([1.0, 1.0])

        # Act
        power = table.bus_power(0, vmag, np.zeros(3))

        # Assert
        np.testing.assert_allclose(power, [100 + 30j, 250 + 60j])

    def test_check_chi_fixed_load(self, table):
        # Act & Assert
        with pytest.raises(ValueError, match="Only curtailable loads"):
            table.check_chi(np.array([0.1, 0.0, 0.0]))

    def test_check_chi_shape(self, table):
        # Act & Assert
        with pytest.raises(ValueError, match="Expected 3"):
            table.check_chi(np.zeros(2))

    def test_check_chi_range(self, table):
        # Act & Assert
        with pytest.raises(ValueError, match="within"):
            table.check_chi(np.array([0.0, 1.5, 0.0]))

    def test_curtailment_cost(self, table):
        # Act
        cost = table.curtailment_cost(0, np.array([0.0, 0.25, 0.0]))

        # Assert
        assert cost == pytest.approx(2.0 * 0.25 * 200)

    def test_curtailed_kw(self, table):
        # Act
        curtailed = table.curtailed_kw(0, np.array([0.0, 0.25, 0.0]))

        # Assert
        np.testing.assert_allclose(curtailed, [0.0, 50.0, 0.0])

    def test_baseline_total(self, table):
        # Assert
        assert table.baseline_total_kw(5) == pytest.approx(350)

    @pytest.mark.parametrize("hour", [-1, 24])
    def test_hour_out_of_range(self, table, hour):
        # Arrange
        vmag = np.ones(table.column_count)
        chi = np.zeros(len(table))

        # Act & Assert
        with pytest.raises(ValueError, match="Hour must be within"):
            table.injections(hour, vmag, chi)

        with pytest.raises(ValueError, match="Hour must be within"):
            table.baseline_total_kw(hour)

        with pytest.raises(ValueError, match="Hour must be within"):
            table.curtailed_kw(hour, chi)

    def test_scaled(self, table):
        # Act
        scaled = table.scaled(0.5)

        # Assert
        assert scaled.baseline_total_kw(0) == pytest.approx(175)
        assert scaled.loads[1].baseline_p[0] == pytest.approx(100)
        assert table.baseline_total_kw(0) == pytest.approx(350)

    def test_scaled_negative(self, table):
        # Act & Assert
        with pytest.raises(ValueError, match="must not be negative"):
            table.scaled(-1)
