"""Maritime common-operating-picture fusion: AIS + UAV detections in, a
geolocated, replayable event picture out."""

__version__ = "0.1.0"
