from thuekit.cli import main

main(prog_name="thuekit")
