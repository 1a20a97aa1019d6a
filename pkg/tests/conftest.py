import pytest

from crashsim import DropScenario, ImpactParams

# fitted reference frame: CogniFly-class flexible exoskeleton
REFERENCE_MASS = 0.241
REFERENCE_DAMPING = 46.0
REFERENCE_STIFFNESS = 7040.0


@pytest.fixture
def reference_params() -> ImpactParams:
    return ImpactParams(mass=REFERENCE_MASS, damping=REFERENCE_DAMPING,
                        stiffness=REFERENCE_STIFFNESS)


@pytest.fixture
def make_scenario():
    def _make(drop_altitude: float, **overrides) -> DropScenario:
        return DropScenario(drop_altitude=drop_altitude, **overrides)

    return _make
