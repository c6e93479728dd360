import pytest

import hybridcell as hc
from hybridcell import umts, wlan


@pytest.fixture(scope="session")
def wlan_params():
    return wlan.WlanParams()


@pytest.fixture(scope="session")
def umts_params():
    return umts.UmtsParams()


@pytest.fixture(scope="session")
def table():
    return umts.UmtsTable.builtin()


@pytest.fixture(scope="session")
def ap18(wlan_params):
    return hc.ApServer(wlan_params, 18)


@pytest.fixture(scope="session")
def nodeb18(umts_params):
    return hc.NodeBServer(umts_params)


@pytest.fixture(scope="session")
def default_streams():
    return hc.StreamConfig()


@pytest.fixture(scope="session")
def default_smdp():
    return hc.SmdpConfig()


@pytest.fixture(scope="session")
def solved_ap_nodeb(ap18, nodeb18, default_streams, default_smdp):
    return hc.value_iterate(ap18, nodeb18, default_streams, default_smdp)


@pytest.fixture(scope="session")
def solved_ap_ap(ap18, default_smdp):
    streams = hc.StreamConfig(f_common_to_first=5.0, f_common_to_second=5.0)
    return hc.value_iterate(ap18, ap18, streams, default_smdp), streams


@pytest.fixture(scope="session")
def solved_nodeb_nodeb(nodeb18, default_smdp):
    streams = hc.StreamConfig(f_common_to_first=5.0, f_common_to_second=5.0)
    return hc.value_iterate(nodeb18, nodeb18, streams, default_smdp), streams
