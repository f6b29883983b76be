import importlib
import pkgutil

import refcast
import refcast.rcf


def test_rcf_modules_have_docstrings():
    for info in pkgutil.iter_modules(refcast.rcf.__path__):
        module = importlib.import_module(f"refcast.rcf.{info.name}")
        assert module.__doc__, info.name


def test_package_names_no_hosted_docs():
    assert not hasattr(refcast, "__docs_url__")
    assert "mkdocs" in refcast.__doc__
    assert "readthedocs" not in refcast.__doc__
