import os

FIXTURE_DIR = "../../tangle_tribes/fixtures"

specific_title_mapping = {
    "hopf": "Hopf Link on the Sphere",
    "genus2-flat": "Flat Diagram on a Closed Genus 2 Surface",
    "genus2-boundary": "Knot on a Genus 2 Surface with Boundary",
}


def fixture_title(fixture_name: str) -> str:
    if fixture_name in specific_title_mapping:
        return specific_title_mapping[fixture_name]
    words = fixture_name.split("-")
    if words[0] in ("sphere", "long"):
        return f"{' '.join(words[1:]).title()} ({words[0].title()})"
    return fixture_name.replace("-", " ").title()


def main():
    print("prebuild [autogen_fixtures]: Generating fixtures page from the bundled diagrams...")
    with open("usage/fixtures.md", "w") as fixtures:
        fixtures.write("# Bundled Diagrams\n\n")
        fixtures.write("Each diagram can be passed to the command line as `fixture:<name>` "
                       "or loaded with `tangle_tribes.load_fixture(<name>)`.\n\n")
        for fixture in sorted(os.listdir(FIXTURE_DIR)):
            if not fixture.endswith(".tdg"):
                continue
            fixture_name = fixture[:-len(".tdg")]
            fixtures.write(
                f"## {fixture_title(fixture_name)}\n`{fixture_name}`\n"
                f"```{{literalinclude}} ../../../tangle_tribes/fixtures/{fixture}\n```\n\n"
            )
    print("prebuild [autogen_fixtures]: Done")
