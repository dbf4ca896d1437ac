from .run import TongueMeasurement, TongueRun

__all__ = (
    "TongueMeasurement",
    "TongueRun",
)
