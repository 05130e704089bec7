"""Gauss-Legendre and Gauss-Kronrod nodes/weights on [-1, 1] as exact doubles.

Generated by scripts/gen_kronrod.py; do not edit by hand.
"""

GAUSS_7_NODES = (
    float.fromhex('-0x1.e5f178e7c6229p-1'),
    float.fromhex('-0x1.7ba9f9be3a1d6p-1'),
    float.fromhex('-0x1.9f95df119fd62p-2'),
    float.fromhex('0x0.0p+0'),
    float.fromhex('0x1.9f95df119fd62p-2'),
    float.fromhex('0x1.7ba9f9be3a1d6p-1'),
    float.fromhex('0x1.e5f178e7c6229p-1'),
)
GAUSS_7_WEIGHTS = (
    float.fromhex('0x1.092f69f826d57p-3'),
    float.fromhex('0x1.1e6b1713d8644p-2'),
    float.fromhex('0x1.86fe74ee32b3dp-2'),
    float.fromhex('0x1.abfd7e03c2fa6p-2'),
    float.fromhex('0x1.86fe74ee32b3dp-2'),
    float.fromhex('0x1.1e6b1713d8644p-2'),
    float.fromhex('0x1.092f69f826d57p-3'),
)
KRONROD_15_NODES = (
    float.fromhex('-0x1.fba009d4d09b1p-1'),
    float.fromhex('-0x1.e5f178e7c6229p-1'),
    float.fromhex('-0x1.bacf827b9bb3ep-1'),
    float.fromhex('-0x1.7ba9f9be3a1d6p-1'),
    float.fromhex('-0x1.2c13a049dfa24p-1'),
    float.fromhex('-0x1.9f95df119fd62p-2'),
    float.fromhex('-0x1.a98b2892e0c77p-3'),
    float.fromhex('0x0.0p+0'),
    float.fromhex('0x1.a98b2892e0c77p-3'),
    float.fromhex('0x1.9f95df119fd62p-2'),
    float.fromhex('0x1.2c13a049dfa24p-1'),
    float.fromhex('0x1.7ba9f9be3a1d6p-1'),
    float.fromhex('0x1.bacf827b9bb3ep-1'),
    float.fromhex('0x1.e5f178e7c6229p-1'),
    float.fromhex('0x1.fba009d4d09b1p-1'),
)
KRONROD_15_WEIGHTS = (
    float.fromhex('0x1.77c5b67d57470p-6'),
    float.fromhex('0x1.026cdaa7b61c4p-4'),
    float.fromhex('0x1.ad384a34814c6p-4'),
    float.fromhex('0x1.200ed0f46e8c1p-3'),
    float.fromhex('0x1.5a1f266e47d5cp-3'),
    float.fromhex('0x1.85d6861c80eb1p-3'),
    float.fromhex('0x1.a2adbcbec9cd8p-3'),
    float.fromhex('0x1.ad04f9087090fp-3'),
    float.fromhex('0x1.a2adbcbec9cd8p-3'),
    float.fromhex('0x1.85d6861c80eb1p-3'),
    float.fromhex('0x1.5a1f266e47d5cp-3'),
    float.fromhex('0x1.200ed0f46e8c1p-3'),
    float.fromhex('0x1.ad384a34814c6p-4'),
    float.fromhex('0x1.026cdaa7b61c4p-4'),
    float.fromhex('0x1.77c5b67d57470p-6'),
)

GAUSS_15_NODES = (
    float.fromhex('-0x1.f9da27c32e6d0p-1'),
    float.fromhex('-0x1.dfe24c4f8b448p-1'),
    float.fromhex('-0x1.b248221fffd63p-1'),
    float.fromhex('-0x1.72e6e181ab3c4p-1'),
    float.fromhex('-0x1.245676f08f3a4p-1'),
    float.fromhex('-0x1.939c69257d6b6p-2'),
    float.fromhex('-0x1.9c0ba62ef04b5p-3'),
    float.fromhex('0x0.0p+0'),
    float.fromhex('0x1.9c0ba62ef04b5p-3'),
    float.fromhex('0x1.939c69257d6b6p-2'),
    float.fromhex('0x1.245676f08f3a4p-1'),
    float.fromhex('0x1.72e6e181ab3c4p-1'),
    float.fromhex('0x1.b248221fffd63p-1'),
    float.fromhex('0x1.dfe24c4f8b448p-1'),
    float.fromhex('0x1.f9da27c32e6d0p-1'),
)
GAUSS_15_WEIGHTS = (
    float.fromhex('0x1.f7dc7227a291bp-6'),
    float.fromhex('0x1.2038260b5d026p-4'),
    float.fromhex('0x1.b6ec9635f1146p-4'),
    float.fromhex('0x1.1dd73b4963161p-3'),
    float.fromhex('0x1.5484f30a86ed1p-3'),
    float.fromhex('0x1.7d41fa76dc267p-3'),
    float.fromhex('0x1.96633f1fd02cep-3'),
    float.fromhex('0x1.9ee1575f9c980p-3'),
    float.fromhex('0x1.96633f1fd02cep-3'),
    float.fromhex('0x1.7d41fa76dc267p-3'),
    float.fromhex('0x1.5484f30a86ed1p-3'),
    float.fromhex('0x1.1dd73b4963161p-3'),
    float.fromhex('0x1.b6ec9635f1146p-4'),
    float.fromhex('0x1.2038260b5d026p-4'),
    float.fromhex('0x1.f7dc7227a291bp-6'),
)
KRONROD_31_NODES = (
    float.fromhex('-0x1.fefa284471223p-1'),
    float.fromhex('-0x1.f9da27c32e6d0p-1'),
    float.fromhex('-0x1.ef7b7f0234d2ep-1'),
    float.fromhex('-0x1.dfe24c4f8b448p-1'),
    float.fromhex('-0x1.cb6641bc8ea03p-1'),
    float.fromhex('-0x1.b248221fffd63p-1'),
    float.fromhex('-0x1.94b1bbdbb28b7p-1'),
    float.fromhex('-0x1.72e6e181ab3c4p-1'),
    float.fromhex('-0x1.4d4f71e35996dp-1'),
    float.fromhex('-0x1.245676f08f3a4p-1'),
    float.fromhex('-0x1.f0b94cd0dec85p-2'),
    float.fromhex('-0x1.939c69257d6b6p-2'),
    float.fromhex('-0x1.325c3e695c106p-2'),
    float.fromhex('-0x1.9c0ba62ef04b5p-3'),
    float.fromhex('-0x1.9e4724daa6d9ep-4'),
    float.fromhex('0x0.0p+0'),
    float.fromhex('0x1.9e4724daa6d9ep-4'),
    float.fromhex('0x1.9c0ba62ef04b5p-3'),
    float.fromhex('0x1.325c3e695c106p-2'),
    float.fromhex('0x1.939c69257d6b6p-2'),
    float.fromhex('0x1.f0b94cd0dec85p-2'),
    float.fromhex('0x1.245676f08f3a4p-1'),
    float.fromhex('0x1.4d4f71e35996dp-1'),
    float.fromhex('0x1.72e6e181ab3c4p-1'),
    float.fromhex('0x1.94b1bbdbb28b7p-1'),
    float.fromhex('0x1.b248221fffd63p-1'),
    float.fromhex('0x1.cb6641bc8ea03p-1'),
    float.fromhex('0x1.dfe24c4f8b448p-1'),
    float.fromhex('0x1.ef7b7f0234d2ep-1'),
    float.fromhex('0x1.f9da27c32e6d0p-1'),
    float.fromhex('0x1.fefa284471223p-1'),
)
KRONROD_31_WEIGHTS = (
    float.fromhex('0x1.606b2430691f0p-8'),
    float.fromhex('0x1.ebc7c97ad100fp-7'),
    float.fromhex('0x1.a12688a63030dp-6'),
    float.fromhex('0x1.218eb0f435decp-5'),
    float.fromhex('0x1.6d477c75a7046p-5'),
    float.fromhex('0x1.b61ee2ef9bab7p-5'),
    float.fromhex('0x1.fbfb7d37c673ap-5'),
    float.fromhex('0x1.1e1f5ae8e0460p-4'),
    float.fromhex('0x1.3ac6bb18ffcb1p-4'),
    float.fromhex('0x1.544c38a8f82f5p-4'),
    float.fromhex('0x1.6ac28ca83cf6dp-4'),
    float.fromhex('0x1.7d7250d880badp-4'),
    float.fromhex('0x1.8bd93e7ca79c3p-4'),
    float.fromhex('0x1.96370e3230056p-4'),
    float.fromhex('0x1.9cc0d76f2b149p-4'),
    float.fromhex('0x1.9f0c36a3b630fp-4'),
    float.fromhex('0x1.9cc0d76f2b149p-4'),
    float.fromhex('0x1.96370e3230056p-4'),
    float.fromhex('0x1.8bd93e7ca79c3p-4'),
    float.fromhex('0x1.7d7250d880badp-4'),
    float.fromhex('0x1.6ac28ca83cf6dp-4'),
    float.fromhex('0x1.544c38a8f82f5p-4'),
    float.fromhex('0x1.3ac6bb18ffcb1p-4'),
    float.fromhex('0x1.1e1f5ae8e0460p-4'),
    float.fromhex('0x1.fbfb7d37c673ap-5'),
    float.fromhex('0x1.b61ee2ef9bab7p-5'),
    float.fromhex('0x1.6d477c75a7046p-5'),
    float.fromhex('0x1.218eb0f435decp-5'),
    float.fromhex('0x1.a12688a63030dp-6'),
    float.fromhex('0x1.ebc7c97ad100fp-7'),
    float.fromhex('0x1.606b2430691f0p-8'),
)
