"""Near-field FMCW synthetic aperture radar simulation and 3D imaging."""

__version__ = "0.1.0"

from nfsar.geometry import (  # noqa: E402
    C,
    ApertureGrid,
    PointScatterer,
    RadarParams,
    Scene,
    SignalCube,
    WavenumberGrid,
    aperture_coordinate,
    build_wavenumber_grid,
    paper_preset,
)
from nfsar.forward import (  # noqa: E402
    MonostaticCheck,
    ValidityReport,
    fresnel_distance,
    monostatic_validity,
    nyquist_check,
    point_response,
    simulate_cube,
)
from nfsar.spectral import SpectrumCube, dispersion_kz, spatial_fft2, spatial_ifft2  # noqa: E402
from nfsar.reconstruct import (  # noqa: E402
    ComplexImage,
    PsfMetrics,
    Volume,
    backprojection_oracle,
    image_grid,
    normalize_db,
    psf_metrics,
    rma_plane,
    rma_volume,
)
