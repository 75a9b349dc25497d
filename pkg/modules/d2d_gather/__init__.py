"""
Módulo d2d_gather
Simulador de coleta compressiva D2D: troca multicast, pull pela estação base,
coleta assistida por AR, relato por nós agregadores e contabilidade de sinalização.
"""
