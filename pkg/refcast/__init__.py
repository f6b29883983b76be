"""This is the main package of the refcast toolbox, reference class forecasting for large dams.

The most used classes and functions are importable from the package root:

- **ingest_reference_csv / ingest_macro_csv:** Read reference class records and country macro series.

- **UpliftCurve:** Required budget or schedule uplift against acceptable risk.

- **ModelSpecBuilder / fit_spec:** Specify and fit random-intercept models on a reference class.

- **predict_published / forecast_report:** Evaluate the published large-dam models and build a two-pronged forecast.

- **SynthSpec / gen_reference_class:** Generate synthetic reference classes with known truth.

The API reference is built from these docstrings with mkdocs, see mkdocs.yml.

Example:
    ```python
    import refcast
    from refcast import LargeDamSummary, forecast_report, load_descriptor
    report = forecast_report(load_descriptor("project.json"), LargeDamSummary.load(), 0.2)
    ```
"""

from .lmm.builder import ModelSpecBuilder
from .lmm.fit import fit, fit_spec
from .lmm.stepwise import stepwise
from .dammodels.descriptor import ProjectDescriptor, load_descriptor
from .dammodels.published import PublishedModelEnum, predict_published
from .dammodels.report import forecast_report
from .rcf.benchmarks import LargeDamSummary, compare_asset_classes, load_benchmarks
from .rcf.describe import describe
from .rcf.uplift import UpliftCurve, debias, required_uplift
from .refdata.ingest import ingest_macro_csv, ingest_reference_csv
from .synth.generator import gen_reference_class
from .synth.spec import SynthSpec
