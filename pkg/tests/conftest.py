import sys
from pathlib import Path

import pytest

from geolam.assets import BUNDLED, load_asset
from geolam.track import parse_track

sys.path.insert(0, str(Path(__file__).parent))

# each fixture fails condition (3) only through the named region
NULLGON = """\
switch s
switch t
edge a s,B,0 t,A,0
edge b t,B,0 s,A,0
region 0 disc
region 0 peripheral
"""

MONOGON = """\
switch s
switch t
edge a s,B,0 s,B,1
edge b s,A,0 t,B,0
edge c t,A,0 t,A,1
region 0 peripheral
region 1 disc
region 1 peripheral
"""

BIGON = """\
switch s
switch t
edge a s,B,0 t,A,0
edge b s,B,1 t,A,1
edge c t,B,0 s,A,0
region 0 peripheral
region 0 peripheral
region 2 disc
"""

TRIGON = """\
switch s
edge a s,A,0 s,B,1
edge b s,B,0 s,B,2
edge c s,B,3 s,B,4
region 1 peripheral
region 3 disc
"""


@pytest.fixture(params=BUNDLED)
def asset(request):
    return load_asset(request.param)


@pytest.fixture
def torus():
    return load_asset("torus")


@pytest.fixture
def sphere4():
    return load_asset("sphere4")


@pytest.fixture
def genus2():
    return load_asset("genus2")


@pytest.fixture
def trigon():
    return parse_track(TRIGON, "trigon")
