"""
Pacote principal modules do sparse-edge-analytics: aplicações de sensoriamento e coleta D2D.
"""
