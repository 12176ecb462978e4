from layerrecon.main import main

main()
