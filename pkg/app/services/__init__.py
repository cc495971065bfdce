"""Services dos esquemas variacionais: física, transporte, otimização, esquemas, oráculos e experimentos."""
