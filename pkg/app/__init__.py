"""Profinite Order Toolkit - 유한 poset, quotient map, P_n 수열과 그 역극한 계산"""

__version__ = "1.0.0"
