from hardy import main
main()
