from condcolor.main import main

main()
