"""Published benchmark tables for the 13 normalised time constants.

Values are transcribed as printed (three significant decimals for the rule
columns, two/three for the proposed tuning).  ``None`` marks a blank cell.
"""

TP_ROWS = (0.10, 0.25, 0.40, 0.55, 0.70, 0.85, 1.00, 2.50, 4.00, 5.50, 7.00, 8.50, 10.00)

# tp -> (h, hi) per rule
TABLE1 = {
    "zn_time": {
        0.10: (0.090, 0.030), 0.25: (0.225, 0.075), 0.40: (0.360, 0.120),
        0.55: (0.495, 0.165), 0.70: (0.630, 0.210), 0.85: (0.765, 0.255),
        1.00: (0.900, 0.300), 2.50: (2.250, 0.750), 4.00: (3.600, 1.200),
        5.50: (4.950, 1.650), 7.00: (6.300, 2.100), 8.50: (7.650, 2.550),
        10.00: (9.000, 3.000),
    },
    "zn_freq": {
        0.10: (0.416, 0.237), 0.25: (0.475, 0.243), 0.40: (0.552, 0.262),
        0.55: (0.636, 0.285), 0.70: (0.724, 0.311), 0.85: (0.814, 0.338),
        1.00: (0.905, 0.365), 2.50: (1.835, 0.654), 4.00: (2.774, 0.947),
        5.50: (3.715, 1.241), 7.00: (4.656, 1.535), 8.50: (5.598, 1.829),
        10.00: (6.540, 2.123),
    },
    "za_iste": {
        0.10: None, 0.25: None, 0.40: None,
        0.55: (0.563, 0.609), 0.70: (0.644, 0.605), 0.85: (0.718, 0.589),
        1.00: (0.786, 0.570), 2.50: (1.656, 0.576), 4.00: (2.553, 0.578),
        5.50: (3.423, 0.574), 7.00: (4.274, 0.569), 8.50: (5.111, 0.564),
        10.00: (5.936, 0.560),
    },
    "proposed": {
        0.10: (0.45, 0.787), 0.25: (0.50, 0.738), 0.40: (0.60, 0.724),
        0.55: (0.70, 0.737), 0.70: (0.92, 0.763), 0.85: (1.10, 0.766),
        1.00: (1.15, 0.744), 2.50: (2.10, 0.682), 4.00: (3.00, 0.654),
        5.50: (3.80, 0.633), 7.00: (4.75, 0.628), 8.50: (6.00, 0.640),
        10.00: (6.65, 0.622),
    },
}

# tp -> (po_y, po_v, ise) per rule; a blank overshoot cell means no overshoot
TABLE2 = {
    "zn_time": {
        0.10: (None, None, 6.095), 0.25: (None, None, 5.192), 0.40: (None, None, 4.605),
        0.55: (None, None, 4.193), 0.70: (None, None, 3.896), 0.85: (None, None, 3.674),
        1.00: (None, None, 3.502), 2.50: (None, 0.177, 2.822), 4.00: (None, 0.849, 2.647),
        5.50: (None, 1.523, 2.574), 7.00: (None, 2.197, 2.536), 8.50: (None, 2.872, 2.513),
        10.00: (None, 3.548, 2.498),
    },
    "zn_freq": {
        0.10: (None, None, 3.186), 0.25: (None, None, 3.266), 0.40: (None, None, 3.261),
        0.55: (None, None, 3.229), 0.70: (None, None, 3.191), 0.85: (None, None, 3.154),
        1.00: (None, None, 3.119), 2.50: (None, 0.112, 2.925), 4.00: (None, 0.609, 2.863),
        5.50: (None, 1.108, 2.837), 7.00: (None, 1.608, 2.825), 8.50: (None, 2.108, 2.819),
        10.00: (None, 2.608, 2.815),
    },
    "za_iste": {
        0.10: None, 0.25: None, 0.40: None,
        0.55: (None, None, 1.998), 0.70: (None, None, 2.098), 0.85: (None, None, 2.212),
        1.00: (None, None, 2.333), 2.50: (None, 0.032, 3.089), 4.00: (None, 0.049, 3.698),
        5.50: (None, 0.053, 4.181), 7.00: (None, 0.053, 4.555), 8.50: (None, 0.052, 4.849),
        10.00: (None, 0.050, 5.084),
    },
    "proposed": {
        0.10: (0.010, 0.014, 1.524), 0.25: (0.010, 0.029, 1.674), 0.40: (0.010, 0.044, 1.788),
        0.55: (0.010, 0.086, 1.869), 0.70: (0.010, 0.099, 1.945), 0.85: (None, 0.100, 2.037),
        1.00: (None, 0.100, 2.129), 2.50: (None, 0.100, 2.939), 4.00: (None, 0.100, 3.582),
        5.50: (None, 0.100, 4.077), 7.00: (None, 0.100, 4.458), 8.50: (None, 0.100, 4.754),
        10.00: (None, 0.100, 4.993),
    },
}

# tp -> (h, hi, po_y, po_v, ise) from the empirical quadratic fits
TABLE3 = {
    0.10: (0.4546, 0.7846, 0.0096, 0.0100, 1.5259),
    0.25: (0.4957, 0.7420, 0.0179, 0.0361, 1.6700),
    0.40: (0.5854, 0.7247, 0.0103, 0.0512, 1.7864),
    0.55: (0.7237, 0.7326, 0.0096, 0.0701, 1.8762),
    0.70: (0.9106, 0.7657, 0.0104, 0.1052, 1.9410),
    0.85: (1.0861, 0.7525, None, 0.0850, 2.0509),
    1.00: (1.1744, 0.7468, None, 0.0974, 2.1315),
    2.50: (2.0658, 0.6965, None, 0.1294, 2.8900),
    4.00: (2.9722, 0.6589, None, 0.1115, 3.5606),
    5.50: (3.8935, 0.6340, None, 0.0913, 4.0928),
    7.00: (4.8298, 0.6218, None, 0.0821, 4.4885),
    8.50: (5.7810, 0.6224, None, 0.0895, 4.7722),
    10.00: (6.7473, 0.6357, None, 0.1158, 4.9695),
}

# printed coefficients (c0, c1, c2) of the empirical fits: (h, hi) per branch
FIT_COEFFS = {
    "gamma_y": ((0.4541, -0.1035, 1.0794), (0.8271, -0.4805, 0.5613)),
    "gamma_v": ((0.5884, 0.5826, 0.0033), (0.7874, -0.0434, 0.0028)),
}
