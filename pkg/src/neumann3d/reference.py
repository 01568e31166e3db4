"""Published L-infinity / L2 errors and point counts for the preset experiments.

Keys are (preset, row label) as produced by the CLI; values map the inverse
grid spacing 1/h to (Linf, L2).
"""

POINT_COUNTS = {
    "sphere": {16: 4302, 32: 17070, 64: 68166, 128: 272718},
    "ellipsoid": {16: 1766, 32: 6958, 64: 27934, 128: 112006},
    "molecule": {16: 2392, 32: 9562, 64: 38354, 128: 153399},
}

ERRORS = {
    ("table1", "no regularization"): {
        16: (3.56e-3, 5.47e-4), 32: (9.25e-4, 1.46e-4), 64: (2.55e-4, 3.45e-5), 128: (6.57e-5, 8.88e-6)},
    ("table1", "order3, delta=2h"): {
        16: (8.90e-3, 3.99e-3), 32: (1.11e-3, 5.00e-4), 64: (1.39e-4, 6.24e-5), 128: (1.74e-5, 7.80e-6)},
    ("table2", "order5, delta=3h"): {
        16: (9.27e-4, 4.10e-4), 32: (3.08e-5, 1.38e-5), 64: (7.64e-7, 3.40e-7), 128: (2.39e-8, 1.07e-8)},
    ("table2", "order5, delta=1.5h^0.8"): {
        16: (5.55e-4, 2.40e-4), 32: (3.08e-5, 1.38e-5), 64: (1.53e-6, 6.86e-7), 128: (9.64e-8, 4.33e-8)},
    ("table3", "f: order5, delta=3h"): {
        16: (2.18e-3, 9.57e-4), 32: (7.19e-5, 3.23e-5), 64: (1.78e-6, 7.90e-7), 128: (5.02e-8, 2.25e-8)},
    ("table3", "u: order5, delta=3h"): {
        16: (9.51e-4, 3.62e-4), 32: (7.43e-5, 1.14e-5), 64: (2.04e-6, 3.58e-7), 128: (4.88e-8, 1.13e-8)},
    ("table4", "u: order5, delta=0.75h^0.6667"): {
        16: (3.90e-2, 3.93e-3), 32: (3.24e-3, 3.34e-4), 64: (3.16e-4, 2.41e-5), 128: (2.67e-5, 1.57e-6)},
    ("table4", "u: order5, delta=1.5h^0.8"): {
        16: (4.67e-2, 5.69e-3), 32: (6.66e-3, 5.11e-4), 64: (5.25e-4, 3.54e-5), 128: (3.37e-5, 1.96e-6)},
    ("table5", "u: order5, delta=0.75h^0.6667"): {
        16: (3.20e-2, 3.50e-3), 32: (3.13e-3, 2.84e-4), 64: (2.59e-4, 1.44e-5), 128: (7.83e-6, 1.04e-6)},
    ("table5", "u: order5, delta=1.5h^0.8"): {
        16: (2.40e-2, 4.39e-3), 32: (2.66e-3, 3.64e-4), 64: (1.91e-4, 2.19e-5), 128: (8.80e-6, 1.30e-6)},
}

# orders as printed, which for tables 4 and 5 carry two decimals
ORDERS = {
    ("table1", "no regularization"): {32: 1.9, 64: 2.1, 128: 2.0},
    ("table1", "order3, delta=2h"): {32: 3.0, 64: 3.0, 128: 3.0},
    ("table2", "order5, delta=3h"): {32: 4.9, 64: 5.3, 128: 5.0},
    ("table2", "order5, delta=1.5h^0.8"): {32: 4.1, 64: 4.3, 128: 4.0},
    ("table3", "f: order5, delta=3h"): {32: 4.9, 64: 5.4, 128: 5.1},
    ("table3", "u: order5, delta=3h"): {32: 5.0, 64: 5.0, 128: 5.0},
    ("table4", "u: order5, delta=0.75h^0.6667"): {32: 3.56, 64: 3.79, 128: 3.94},
    ("table4", "u: order5, delta=1.5h^0.8"): {32: 3.48, 64: 3.85, 128: 4.17},
    ("table5", "u: order5, delta=0.75h^0.6667"): {32: 3.62, 64: 4.30, 128: 3.79},
    ("table5", "u: order5, delta=1.5h^0.8"): {32: 3.59, 64: 4.05, 128: 4.07},
}
