import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--long",
        action="store_true",
        default=False,
        help="run the long tier (m >= 16 dynamics)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long tier; enable with --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)
