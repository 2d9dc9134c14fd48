"""Physical constants."""

C0 = 299_792_458.0  # speed of light [m/s]
