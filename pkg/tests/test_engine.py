from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snnkit.engine import (
    NoVerdictNeuronError,
    ResourceReport,
    RunLimits,
    Simulation,
    membrane_update,
    render_raster,
    run,
)
from snnkit.model import (
    InvalidNetworkError,
    Network,
    NetworkBuilder,
    NeuronSpec,
    PeriodicSchedule,
)
from snnkit.randnet import random_network

from reference_engine import simulate_reference

F = Fraction


class TestMembraneUpdate:
    def test_single_default_spike_fires_default_neuron(self):
        assert membrane_update(F(0), F(1), F(1), F(1), F(0)) == (F(0), True)

    def test_leaky_accumulation_reaches_threshold(self):
        # 1/2 * 3/4 + 3/4 = 9/8 >= 1
        assert membrane_update(F(3, 4), F(1, 2), F(3, 4), F(1), F(0)) == (F(0), True)

    def test_inhibition_clamps_at_zero(self):
        assert membrane_update(F(1, 2), F(1), F(-2), F(1), F(0)) == (F(0), False)

    def test_zero_threshold_always_fires(self):
        next_u, fired = membrane_update(F(0), F(1), F(0), F(0), F(2))
        assert fired and next_u == 2

    def test_reset_above_threshold_is_allowed(self):
        next_u, fired = membrane_update(F(5), F(1), F(0), F(3), F(7))
        assert fired and next_u == 7

    def test_subthreshold_keeps_potential(self):
        assert membrane_update(F(1, 3), F(1, 2), F(1, 4), F(1), F(0)) == (F(5, 12), False)

    @given(
        u=st.fractions(min_value=0, max_value=10, max_denominator=8),
        m=st.fractions(min_value=0, max_value=1, max_denominator=8),
        s=st.fractions(min_value=-10, max_value=10, max_denominator=8),
        t=st.fractions(min_value=0, max_value=10, max_denominator=8),
        r=st.fractions(min_value=0, max_value=10, max_denominator=8),
    )
    @settings(max_examples=200, deadline=None)
    def test_clamp_and_threshold_properties(self, u, m, s, t, r):
        next_u, fired = membrane_update(u, m, s, t, r)
        assert next_u >= 0
        if fired:
            assert max(F(0), m * u + s) >= t
            assert next_u == r
        else:
            assert next_u == max(F(0), m * u + s)
            assert next_u < t


def _one_shot_network():
    builder = NetworkBuilder()
    builder.add_input("p", [0])
    builder.add_neuron("sink")
    builder.set_accept("sink")
    return builder.build()


class TestStep:
    def test_programmed_spike_counts_energy(self, backend):
        sim = Simulation(_one_shot_network(), backend=backend)
        assert sim.step() == ("p",)
        assert sim.energy == 1
        assert sim.pending() == {}

    def test_self_loop_sustains_firing(self, backend):
        builder = NetworkBuilder()
        builder.add_input("seed", [0])
        builder.add_neuron("loop")
        builder.add_synapse("seed", "loop")
        builder.add_synapse("loop", "loop")
        net = builder.build()
        sim = Simulation(net, backend=backend)
        for _ in range(6):  # t = 0..5
            sim.step()
        assert sim.energy == 1 + 5

    def test_self_retriggering_counter_neuron(self, backend):
        # threshold = reset = 2, leak 1: once the potential reaches 2 the
        # neuron fires every subsequent step because reset restores it.
        builder = NetworkBuilder()
        builder.add_input("p", [0, 1])
        builder.add_neuron("e", threshold=2, reset=2, leak=1)
        builder.add_synapse("p", "e")
        builder.add_synapse("p", "e")  # parallel synapses sum
        net = builder.build()
        sim = Simulation(net, backend=backend)
        fired_at = []
        for t in range(8):
            if "e" in sim.step():
                fired_at.append(t)
        assert fired_at == [1, 2, 3, 4, 5, 6, 7]

    def test_inputs_to_programmed_neurons_are_ignored(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [3])
        builder.add_input("q", [0])
        builder.add_neuron("sink")
        builder.add_synapse("q", "p", weight=100)
        builder.add_synapse("q", "sink", weight=100)
        sim = Simulation(builder.build(), backend=backend)
        fires = {t: sim.step() for t in range(5)}
        assert fires[1] == ("sink",)
        assert fires[3] == ("p",)
        assert fires[2] == ()

    def test_potentials_are_exact_and_clamped(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [0])
        builder.add_neuron("n", threshold=10, leak="1/2")
        builder.add_synapse("p", "n", weight="3/4")
        builder.set_accept("n")
        sim = Simulation(builder.build(), backend=backend)
        sim.step()
        sim.step()
        assert sim.potentials()["n"] == F(3, 4)
        sim.step()
        assert sim.potentials()["n"] == F(3, 8)
        sim.step()
        assert sim.potentials()["n"] == F(3, 16)

    def test_pending_only_future_arrivals(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [0])
        builder.add_neuron("n")
        builder.add_synapse("p", "n", delay=3, weight="1/2")
        builder.set_accept("n")
        sim = Simulation(builder.build(), backend=backend)
        sim.step()
        assert sim.pending() == {(3, "n"): F(1, 2)}
        sim.step()
        sim.step()
        sim.step()
        assert sim.pending() == {}

    def test_step_after_verdict_raises(self, backend, trivial_accept_network):
        sim = Simulation(trivial_accept_network, backend=backend)
        sim.step()
        assert sim.verdict == "accept"
        with pytest.raises(RuntimeError):
            sim.step()

    def test_state_snapshot(self, backend):
        sim = Simulation(_one_shot_network(), backend=backend)
        sim.step()
        state = sim.state()
        assert state.t == 1
        assert state.energy == 1
        assert state.fired_now == ("p",)


class TestRun:
    def test_trivial_accept(self, backend, trivial_accept_network):
        report, _ = run(trivial_accept_network, RunLimits(10), backend=backend)
        assert report == ResourceReport("accept", 1, 1, 1, 1, 0)

    def test_simultaneous_verdicts_are_ambiguous(self, backend):
        builder = NetworkBuilder()
        builder.add_input("a", [0])
        builder.add_input("r", [0])
        builder.set_accept("a")
        builder.set_reject("r")
        report, _ = run(builder.build(), RunLimits(5), backend=backend)
        assert report.verdict == "ambiguous"
        assert report.time == 1

    def test_clock_into_accept(self, backend):
        builder = NetworkBuilder()
        builder.add_input("seed", [0])
        builder.add_neuron("clk")
        builder.add_synapse("seed", "clk")
        builder.add_synapse("clk", "clk", delay=3)
        builder.add_neuron("acc")
        builder.add_synapse("clk", "acc")
        builder.set_accept("acc")
        report, trace = run(builder.build(), RunLimits(32), trace=True, backend=backend)
        assert report.verdict == "accept"
        assert trace.fire_times("acc") == (2,)
        assert report.energy == 3  # seed, clock tick, accept

    def test_timeout_at_step_cap(self, backend):
        builder = NetworkBuilder()
        builder.add_neuron("acc")  # never fires
        builder.set_accept("acc")
        report, _ = run(builder.build(), RunLimits(7), backend=backend)
        assert report.verdict == "timeout"
        assert report.time == 7

    def test_spike_cap_times_out(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [0, 1, 2, 3, 4, 5])
        builder.add_neuron("acc")
        builder.set_accept("acc")
        report, _ = run(
            builder.build(), RunLimits(10, max_total_spikes=2), backend=backend
        )
        assert report.verdict == "timeout"
        assert report.energy == 3
        assert report.time == 3

    def test_verdict_wins_over_spike_cap_in_same_step(self, backend, trivial_accept_network):
        report, _ = run(
            trivial_accept_network, RunLimits(10, max_total_spikes=0), backend=backend
        )
        assert report.verdict == "accept"

    def test_requires_verdict_neuron(self, backend):
        builder = NetworkBuilder()
        builder.add_neuron("n")
        with pytest.raises(NoVerdictNeuronError):
            run(builder.build(), RunLimits(5), backend=backend)

    def test_rejects_invalid_network(self, backend):
        bad = Network(neurons=(NeuronSpec("a", threshold=F(-1)),), accept="a")
        with pytest.raises(InvalidNetworkError):
            run(bad, RunLimits(5), backend=backend)

    def test_gadget_energy_split(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [0, 2])
        builder.add_input("g", [1])
        builder.add_neuron("acc")
        builder.set_accept("acc")
        builder.tag_gadget("g")
        report, _ = run(builder.build(), RunLimits(5), backend=backend)
        assert report.energy == 3
        assert report.energy_payload == 2


class TestRunLimits:
    def test_validation(self):
        with pytest.raises(ValueError):
            RunLimits(0)
        with pytest.raises(ValueError):
            RunLimits(5, max_total_spikes=-1)


class TestTraceFormat:
    def test_render(self, trivial_accept_network):
        report, trace = run(trivial_accept_network, RunLimits(5), trace=True)
        text = trace.render()
        assert text.splitlines() == [
            "t=0 fired=acc energy=1",
            "verdict=accept time=1 energy=1 payload_energy=1 neurons=1 synapses=0",
        ]

    def test_silent_steps_omitted(self):
        builder = NetworkBuilder()
        builder.add_input("p", [0, 4])
        builder.add_neuron("acc")
        builder.set_accept("acc")
        _, trace = run(builder.build(), RunLimits(9), trace=True)
        assert [step.t for step in trace.steps] == [0, 4]

    def test_raster(self, trivial_accept_network):
        report, trace = run(trivial_accept_network, RunLimits(5), trace=True)
        assert render_raster(trace, trivial_accept_network) == "acc |*|\n"


class TestReportInvariant:
    def test_energy_bounded_by_time_times_neurons(self):
        with pytest.raises(ValueError):
            ResourceReport("accept", 1, 5, 5, 2, 0)


class TestAgainstReference:
    def test_random_networks_match_brute_force(self, backend):
        for seed in range(40):
            net = random_network(seed, max_neurons=12, max_synapses=30)
            report, trace = run(net, RunLimits(60), trace=True, backend=backend)
            ref = simulate_reference(net, 60)
            assert report.verdict == ref.verdict, f"seed {seed}"
            assert report.time == ref.time, f"seed {seed}"
            assert report.energy == ref.energy, f"seed {seed}"
            assert report.energy_payload == ref.payload_energy, f"seed {seed}"
            got = [(step.t, step.fired) for step in trace.steps]
            assert got == ref.fired_log, f"seed {seed}"

    def test_programmed_independence(self, backend):
        # Firing times of programmed neurons equal their schedule regardless
        # of incoming synapses.
        for seed in range(20):
            net = random_network(seed, max_neurons=10, max_synapses=25)
            _, trace = run(net, RunLimits(50), trace=True, backend=backend)
            horizon = trace.report.time
            for name, sched in net.programmed.items():
                expected = tuple(t for t in range(horizon) if sched.fires_at(t))
                assert trace.fire_times(name) == expected

    def test_no_duplicate_ids_within_step(self, backend):
        for seed in range(10):
            net = random_network(seed)
            _, trace = run(net, RunLimits(50), trace=True, backend=backend)
            for step in trace.steps:
                assert len(set(step.fired)) == len(step.fired)

    def test_potentials_nonnegative_throughout(self, backend):
        for seed in range(10):
            net = random_network(seed, max_neurons=8, max_synapses=20)
            sim = Simulation(net, backend=backend)
            for _ in range(30):
                if sim.verdict is not None:
                    break
                sim.step()
                assert all(v >= 0 for v in sim.potentials().values())

    def test_pending_arrivals_always_in_the_future(self, backend):
        for seed in range(10):
            net = random_network(seed, max_neurons=8, max_synapses=20)
            sim = Simulation(net, backend=backend)
            for _ in range(25):
                if sim.verdict is not None:
                    break
                sim.step()
                last_step = sim.t - 1
                assert all(arrival > last_step for arrival, _ in sim.pending())


class TestLongIdleDecay:
    def test_decay_over_long_gap_is_exact(self, backend):
        # The potential sits untouched for 49 steps; the stored value must
        # equal stepwise halving exactly: 2**-50 + 1 after the second spike.
        builder = NetworkBuilder()
        builder.add_input("p", [0, 50])
        builder.add_neuron("n", threshold=100, leak="1/2")
        builder.add_synapse("p", "n")
        sim = Simulation(builder.build(), backend=backend)
        for _ in range(52):
            sim.step()
        assert sim.potentials()["n"] == Fraction(1, 2**50) + 1

    def test_long_gap_matches_reference(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", [0, 40])
        builder.add_neuron("n", threshold="81/80", leak="3/4")
        builder.add_neuron("acc")
        builder.add_synapse("p", "n")
        builder.add_synapse("n", "acc")
        builder.set_accept("acc")
        net = builder.build()
        report, trace = run(net, RunLimits(60), trace=True, backend=backend)
        ref = simulate_reference(net, 60)
        assert [(s.t, s.fired) for s in trace.steps] == ref.fired_log
        assert report.verdict == ref.verdict


class TestScheduleEdges:
    def test_periodic_offset_beyond_horizon(self, backend):
        builder = NetworkBuilder()
        builder.add_input("late", PeriodicSchedule(offset=100, period=3))
        builder.add_neuron("acc")
        builder.set_accept("acc")
        report, _ = run(builder.build(), RunLimits(50), backend=backend)
        assert report.verdict == "timeout"
        assert report.energy == 0

    def test_empty_explicit_schedule_never_fires(self, backend):
        builder = NetworkBuilder()
        builder.add_input("mute", [])
        builder.add_neuron("acc")
        builder.set_accept("acc")
        report, _ = run(builder.build(), RunLimits(20), backend=backend)
        assert report.energy == 0

    def test_dense_explicit_schedule(self, backend):
        builder = NetworkBuilder()
        builder.add_input("p", list(range(0, 20, 2)))
        builder.add_neuron("acc", threshold=100)
        builder.set_accept("acc")
        report, _ = run(builder.build(), RunLimits(30), backend=backend)
        assert report.energy == 10
