# layerrecon - multilayer network layer reconstruction and missing link scoring
__version__ = "1.0.0"
