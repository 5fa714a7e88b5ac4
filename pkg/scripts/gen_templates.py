#!/usr/bin/env python
"""Regenerate the prompt template data files under src/flextab/templates/.

Demonstration tables are rendered through the real serializers so demo
payloads and live payloads always share one formatting. Run from the
repository root after changing any serializer or demonstration content.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from flextab.core import Table  # noqa: E402
from flextab.formats import TabularFormat, serialize  # noqa: E402

OUT = ROOT / "src" / "flextab" / "templates"

# ---------------------------------------------------------------- demo tables

AIRCRAFT = Table(
    header=("Aircraft", "Description", "Max Gross Weight", "Total disk area",
            "Max disk Loading"),
    rows=(
        ("Robinson R-22", "Light utility helicopter", "1,370 lb (635 kg)",
         "497 ft² (46.2 m²)", "2.6 lb/ft² (14 kg/m²)"),
        ("Bell 206B3 JetRanger", "Turboshaft utility helicopter",
         "3,200 lb (1,451 kg)", "872 ft² (81.1 m²)", "3.7 lb/ft² (18 kg/m²)"),
        ("CH-47D Chinook", "Tandem rotor helicopter", "50,000 lb (22,680 kg)",
         "5,655 ft² (526 m²)", "8.8 lb/ft² (43 kg/m²)"),
    ))

PLAYERS = Table(
    header=("Player", "No.", "Nationality", "Position", "Years in Toronto",
            "School/Club Team"),
    rows=(
        ("Mark Baker", "3", "United States", "Guard", "1998-99", "Ohio State"),
        ("Marcus Banks", "3", "United States", "Guard", "2009-10", "UNLV"),
        ("Leandro Barbosa", "20", "Brazil", "Guard", "2010-2012",
         "Tilibra/Copimax ( Brazil )"),
    ))

SKODA = Table(
    header=("Model", "1991", "1995", "1996", "1997", "1998", "1999", "2000",
            "2001", "2002", "2003", "2004"),
    rows=(
        ("Skoda Felicia", "172,000", "210,000", "-", "288,458", "261,127",
         "241,256", "148,028", "44,963", "-", "-", "-"),
        ("Skoda Octavia", "-", "-", "-", "47,876", "102,373", "143,251",
         "158,503", "164,134", "164,017", "165,635", "181,683"),
        ("Skoda Fabia", "-", "-", "-", "-", "-", "823", "128,872", "250,978",
         "264,641", "260,988", "247,600"),
    ))

RIDERS = Table(
    header=("Place", "Rider", "Country", "Team", "Points", "Wins"),
    rows=(
        ("1", "Sylvain Geboers", "Belgium", "Suzuki", "3066", "3"),
        ("2", "Adolf Weil", "Germany", "Maico", "2331", "2"),
        ("3", "John Banks", "United Kingdom", "CZ", "971", "0"),
        ("4", "Mark Blackwell", "United States", "Husqvarna", "604", "0"),
        ("5", "Brad Lackey", "United States", "CZ", "603", "0"),
    ))

GOLF = Table(
    header=("tournament", "wins", "top - 5", "top - 10", "top - 25", "events",
            "cuts made"),
    rows=(
        ("masters tournament", "0", "1", "2", "4", "4", "4"),
        ("us open", "0", "2", "3", "4", "6", "5"),
        ("the open championship", "1", "2", "2", "2", "3", "3"),
        ("pga championship", "0", "0", "1", "2", "5", "4"),
        ("totals", "1", "5", "8", "12", "18", "16"),
    ))

ATHLETICS = Table(
    header=("year", "competition", "venue", "position", "event"),
    rows=(
        ("2006", "world cross country championships", "fukuoka , japan",
         "10th", "individual junior race"),
        ("2006", "world cross country championships", "fukuoka , japan",
         "3rd", "team junior race"),
        ("2006", "african championships in athletics", "bambous , mauritius",
         "5th", "10000 m"),
        ("2006", "world road running championships", "debrecen , hungary",
         "7th", "individual 20 km"),
        ("2006", "world road running championships", "debrecen , hungary",
         "3rd", "team 20 km"),
        ("2007", "world cross country championships", "mombasa , kenya",
         "7th", "individual"),
        ("2007", "all - africa games", "algiers , algeria", "2nd", "10000 m"),
        ("2007", "world championships in athletics", "osaka , japan",
         "13th", "10000 m"),
        ("2009", "world cross country championships", "amman , jordan",
         "17th", "individual"),
        ("2013", "world championships", "moscow , russia", "3rd", "marathon"),
    ))

BRASS = Table(
    header=("Year", "Division", "League", "Regular Season", "Playoffs",
            "Open Cup"),
    rows=(
        ("2003", "4", "USL PDL", "4th, Heartland", "Did not qualify",
         "Did not qualify"),
        ("2004", "4", "USL PDL", "5th, Heartland", "Did not qualify",
         "Did not qualify"),
        ("2005", "4", "USL PDL", "3rd, Heartland", "Did not qualify",
         "Did not qualify"),
        ("2006", "4", "USL PDL", "3rd, Heartland", "1st Round",
         "Did not qualify"),
        ("2007", "4", "USL PDL", "4th, Heartland", "Did not qualify",
         "1st Round"),
    ))

EPISODES = Table(
    header=("Num", "Episode", "Original Airdate"),
    rows=(
        ("1", "Pilot", "June 1, 2009"),
        ("2", "Do-Si-Do", "June 8, 2009"),
        ("3", "The Legend of Dylan McKay", "June 15, 2009"),
        ("4", "Environmental Hazards", "June 22, 2009"),
    ))

DINO = Table(
    header=("Single", "Album", "Chart", "Position"),
    rows=(
        ("I Like It", "24/7", "Billboard Hot 100", "8"),
        ("Romeo", "24/7", "Billboard Hot 100", "6"),
        ("Sunshine", "Swingin'", "Billboard Hot 100", "23"),
        ("Gentle", "The Way I Am", "Adult Contemporary", "31"),
    ))

PENSKE = Table(
    header=("Year", "Team", "Driver", "Finish"),
    rows=(
        ("2001", "Team Penske", "Helio Castroneves", "1"),
        ("2002", "Team Penske", "Helio Castroneves", "1"),
        ("2003", "Team Penske", "Gil de Ferran", "1"),
        ("2006", "Team Penske", "Sam Hornish Jr.", "1"),
        ("2015", "Team Penske", "Juan Pablo Montoya", "1"),
    ))

# ---------------------------------------------------------- demo question sets

Q_AIRCRAFT = "What is the max gross weight of the Robinson R-22?"
Q_PLAYERS = "How many players were with the school or club team La Salle?"
Q_SKODA = "is the number on skoda fabia for 1999 more or less than 1000?"
Q_RIDERS = ("which country had the most riders that placed in the top 20 of "
            "the 1971 trans-ama final standings?")
Q_GOLF = ("tony lema be in the top 5 for the master tournament , the us open "
          ", and the open championship")
Q_ATHLETICS = "japan and hungary host the competition 3 time each"

A_AIRCRAFT = (
    "To find out what is the max gross weight of Robinson R-22, we need to "
    'look at the "Max Gross Weight" column of the table provided. According '
    "to the table, the max gross weight of the Robinson R-22 is 1,370 lb "
    "(635 kg), so the answer is: 1,370 lb (635 kg)")
A_PLAYERS = (
    "To count the number of players with the school or club team La Salle, "
    'we need to look at the "School/Club Team" column of the table provided. '
    "According to the table, there are 1 player whose School/Club Team is La "
    "Salle, so the answer is: 1")
A_SKODA = (
    "To find out if the number on the Skoda Fabia for 1999 is more or less "
    'than 1000, we need to look at the data provided for the "Skoda Fabia" '
    'in "1999", which is 823, that is, the number for the Skoda Fabia in '
    "1999 is less than 1000, so the answer is: less")
A_RIDERS = (
    "To find out which country had the most riders in the top 20, we need to "
    'look at the "Country" column of the table provided and count the number '
    "of times each country appears. According to the table, United States "
    "had the most riders, so the answer is: United States")
A_GOLF = (
    "To verify whether tony lema be in the top 5 for the master tournament , "
    'the us open , and the open championship, we need to look at the "top - '
    '5" column of the table provided. According to the table, the "top - 5" '
    'column of the "masters tournament", "us open", and "the open '
    'championship" are all more than zero, so the answer is: True')
A_ATHLETICS = (
    "To verify whether japan and hungary both host the competition 3 time, "
    'we need to look at the "venue" column of the table provided. According '
    'to the table, "japan" hosts the competition 3 times, but "hungary" '
    "hosts the competition 2 times, so the answer is: False")

# ------------------------------------------------------------- solver programs

DICT_QA_SOLVERS = [
    '''def solver(table):
    for row in table:
        if row["Aircraft"] == "Robinson R-22":
            return row["Max Gross Weight"]''',
    '''def solver(table):
    players_la_salle = set()
    for row in table:
        if row["School/Club Team"] == "La Salle": players_la_salle.add(row["Player"])
    return len(players_la_salle)''',
    '''def solver(table):
    for row in table:
        if row["Model"] == "Skoda Fabia":
            num_1999 = row["1999"].replace(",", "")
            if num_1999 != "-" and int(num_1999) > 1000: return "more"
            else: return "less"
    return "less"''',
    '''def solver(table):
    country_counts = {}
    for row in table:
        country = row["Country"]
        if country in country_counts: country_counts[country] += 1
        else: country_counts[country] = 1
    max_riders = max(country_counts.values())
    countries_with_max_riders = [country for country, count in country_counts.items()
    if count == max_riders]
    return countries_with_max_riders[0]''',
]

LIST_QA_SOLVERS = [
    '''def solver(table):
    for row in table[1:]:
        if row[0] == "Robinson R-22": return row[2]''',
    '''def solver(table):
    players_la_salle = set()
    for row in table[1:]:
        if row[5] == "La Salle": players_la_salle.add(row[0])
    return len(players_la_salle)''',
    '''def solver(table):
    for row in table[1:]:
        if row[0] == 'Skoda Fabia':
            if row[6] == "-" or int(row[6].replace(",", "")) < 1000: return "less"
            else: return "more"''',
    '''def solver(table):
    country_counts = {}
    for row in table[1:]:
        country = row[2]
        if country in country_counts: country_counts[country] += 1
        else: country_counts[country] = 1
    max_riders = max(country_counts.values())
    countries_max = [c for c, count in country_counts.items() if count == max_riders]
    return countries_max[0]''',
]

PANDAS_QA_SOLVERS = [
    '''def solver(table):
    import pandas as pd
    max_gross_weight_r22 = table[table["Aircraft"] == "Robinson R-22"]["Max Gross Weight"].iloc[0]
    return max_gross_weight_r22''',
    '''def solver(table):
    import pandas as pd
    la_salle_count = table[table["School/Club Team"] == "La Salle"].shape[0]
    return la_salle_count''',
    '''def solver(table):
    import pandas as pd
    fabia_row = table[table['Model'] == 'Skoda Fabia']
    fabia_1999_sales = fabia_row['1999'].values[0]
    if fabia_1999_sales == '-' or int(fabia_1999_sales.replace(",", "")) < 1000:
        return 'less'
    else:
        return 'more'\
''',
    '''def solver(table):
    import pandas as pd
    most_riders_country = table['Country'].value_counts().idxmax()
    return most_riders_country''',
]

DB_QA_SQL = [
    "SELECT year FROM information WHERE playoffs != 'Did not qualify' ORDER "
    "BY year ASC LIMIT 1;",
    "SELECT episode FROM information WHERE num = (SELECT num FROM information "
    "WHERE episode = 'Do-Si-Do') + 1;",
    "SELECT album FROM information WHERE chart = 'Billboard Hot 100' GROUP BY "
    "album ORDER BY COUNT(*) DESC LIMIT 1;",
    "SELECT MAX(year) FROM information WHERE team = 'Team Penske' AND finish = 1;",
]

DB_QA_QUESTIONS = [
    "when was the first time the kansas city brass qualified for the playoffs?",
    'what was the next episode after "do-si-do?"',
    "which dino album yielded the most songs on the billboard hot 100?",
    "when was the last year team penske finished first?",
]

DB_QA_TABLES = [BRASS, EPISODES, DINO, PENSKE]

DB_UNIFIED_SQL = [
    "SELECT max_gross_weight FROM information WHERE aircraft = 'Robinson R-22';",
    "SELECT COUNT(*) FROM information WHERE school_club_team = 'La Salle';",
    "SELECT CASE WHEN CAST(_1999 AS INTEGER) < 1000 THEN 'less' ELSE 'more' "
    "END AS result FROM information WHERE model = 'Skoda Fabia';",
    "SELECT country, COUNT(rider) as rider_count FROM information WHERE place <= 20 "
    "GROUP BY country ORDER BY rider_count DESC LIMIT 1;",
]

DICT_VERIF_SOLVERS = [
    '''def solver(table):
    top_5_tournament = [row["tournament"] for row in table if int(row["top - 5"]) > 0]
    if "masters tournament" not in top_5_tournament:
        return False
    if "us open" not in top_5_tournament:
        return False
    if "the open championship" not in top_5_tournament:
        return False
    return True''',
    '''def solver(table):
    japan_host_time = 0
    hungary_host_time = 0
    for row in table:
        if "japan" in row["venue"]:
            japan_host_time += 1
        elif "hungary" in row["venue"]:
            hungary_host_time += 1
    return (japan_host_time == 3 and hungary_host_time == 3)''',
]

LIST_VERIF_SOLVERS = [
    '''def solver(table):
    top_5_tournament = [row[0] for row in table[1:] if int(row[2]) > 0]
    if "masters tournament" not in top_5_tournament:
        return False
    if "us open" not in top_5_tournament:
        return False
    if "the open championship" not in top_5_tournament:
        return False
    return True''',
    '''def solver(table):
    japan_host_time = 0
    hungary_host_time = 0
    for row in table[1:]:
        if "japan" in row[2]:
            japan_host_time += 1
        elif "hungary" in row[2]:
            hungary_host_time += 1
    return (japan_host_time == 3 and hungary_host_time == 3)''',
]

PANDAS_VERIF_SOLVERS = [
    '''def solver(table):
    tournaments = ["masters tournament", "us open", "the open championship"]
    for tournament in tournaments:
        row = table[table['tournament'] == tournament]
        if row.empty or int(row['top - 5'].values[0]) == 0:
            return False
    return True''',
    '''def solver(table):
    import pandas as pd
    japan_host_time = table['venue'].str.contains('japan').sum()
    hungary_host_time = table['venue'].str.contains('hungary').sum()
    return (japan_host_time == 3 and hungary_host_time == 3)''',
]

DB_VERIF_SQL = [
    "SELECT CASE  WHEN (SELECT COUNT(*) FROM information WHERE tournament IN "
    "('masters tournament', 'us open', 'the open championship') AND top_5 > 0) = 3 "
    "THEN 'True' ELSE 'False' END AS result;",
    "SELECT CASE WHEN (SELECT COUNT(*) FROM information WHERE venue LIKE "
    "'%japan%') = 3 AND (SELECT COUNT(*) FROM information WHERE venue LIKE "
    "'%hungary%') = 3 THEN 'True' ELSE 'False' END AS result;",
]

# ------------------------------------------------------------------- builders

MD_QA_INSTRUCTION = (
    'Please answer the question with the given table, present the final '
    'result in the format "..., so the answer is: (answer)":\n'
    "Please note that utilize the format, do not include periods. Here are "
    "some instances you may refer to:")

MD_VERIF_INSTRUCTION = (
    "Verify the consistency between the table and the utterance.\n"
    'Please present the final result in the format "..., so the answer is: '
    '(answer)" and the "(answer)" is "True" or "False".\n'
    "Please note that utilize the format, do not include periods.\n"
    "Here are some demonstrations you may refer to:")

CODE_QA_INSTRUCTION = (
    "Answer the question with the given table using python code.\n"
    "You should generate a function with the following signature without any "
    "other parameters. Here are some instances you may refer to:")

CODE_VERIF_INSTRUCTION = (
    "Verify the consistency between the table and the utterance with "
    '"True" or "False" using python code.\n'
    "You should generate a function with the following signature without any "
    "other parameters. Here are some demonstrations you may refer to:")

DB_INSTRUCTION = (
    "Please complete the sql below to solve the question with the given "
    "database.\nHere are some instances you may refer to:")

CODE_QA_CLOSING = (
    "Based on the above demonstrations, answer the following utterance with "
    "the following table using Python code.")

CODE_VERIF_CLOSING = (
    "Based on the above demonstrations, Verify the consistency between the "
    "following table and utterance.")

MD_VERIF_CLOSING = CODE_VERIF_CLOSING

DB_CLOSING = (
    "Based on the above demonstrations, answer the following utterance with "
    "the following database using SQL.")


def markdown_template(task, instruction, closing, demos):
    parts = [instruction, "---"]
    for table, question, answer in demos:
        payload = serialize(table, TabularFormat.MARKDOWN).text
        parts.append(f"table:\n{payload}\nutterance:\n{question}\nanswer:\n{answer}")
        parts.append("---")
    if closing:
        parts.append(closing)
    parts.append("table:\n<table>\nutterance:\n<utterance>\nanswer:")
    body = "\n".join(parts)
    return header_line(TabularFormat.MARKDOWN, task, len(demos)) + body + "\n"


def code_template(fmt, task, instruction, closing, demos):
    parts = [instruction, "---"]
    for table, question, solver in demos:
        payload = serialize(table, fmt).text
        parts.append(f"table = {payload}\nutterance: {question}\n{solver}")
        parts.append("---")
    parts.append(closing)
    parts.append("table = <table>\nutterance: <utterance>\n"
                 "def solver(table):\n    # Your code here")
    body = "\n".join(parts)
    return header_line(fmt, task, len(demos)) + body + "\n"


def database_template(task, demos):
    parts = [DB_INSTRUCTION, "---"]
    for table, question, sql in demos:
        payload = serialize(table, TabularFormat.DATABASE).text
        parts.append(f"database:\n{payload}\nutterance:\n{question}\nsql:\n{sql}")
        parts.append("---")
    parts.append(DB_CLOSING)
    parts.append("database:\n<table>\nutterance:\n<utterance>\nsql:\nSELECT")
    body = "\n".join(parts)
    return header_line(TabularFormat.DATABASE, task, len(demos)) + body + "\n"


def header_line(fmt, task, shots):
    return f"# format={fmt.value} task={task} shots={shots}\n"


def build_all() -> dict[str, dict[str, str]]:
    qa_tables = [AIRCRAFT, PLAYERS, SKODA, RIDERS]
    qa_questions = [Q_AIRCRAFT, Q_PLAYERS, Q_SKODA, Q_RIDERS]
    qa_md_answers = [A_AIRCRAFT, A_PLAYERS, A_SKODA, A_RIDERS]
    verif_tables = [GOLF, ATHLETICS]
    verif_questions = [Q_GOLF, Q_ATHLETICS]
    verif_md_answers = [A_GOLF, A_ATHLETICS]

    per_format = {
        "markdown_qa.txt": markdown_template(
            "qa", MD_QA_INSTRUCTION, None,
            list(zip(qa_tables, qa_questions, qa_md_answers))),
        "markdown_verification.txt": markdown_template(
            "verification", MD_VERIF_INSTRUCTION, MD_VERIF_CLOSING,
            list(zip(verif_tables, verif_questions, verif_md_answers))),
        "dict_qa.txt": code_template(
            TabularFormat.DICT, "qa", CODE_QA_INSTRUCTION, CODE_QA_CLOSING,
            list(zip(qa_tables, qa_questions, DICT_QA_SOLVERS))),
        "dict_verification.txt": code_template(
            TabularFormat.DICT, "verification", CODE_VERIF_INSTRUCTION,
            CODE_VERIF_CLOSING,
            list(zip(verif_tables, verif_questions, DICT_VERIF_SOLVERS))),
        "list_qa.txt": code_template(
            TabularFormat.LIST, "qa", CODE_QA_INSTRUCTION, CODE_QA_CLOSING,
            list(zip(qa_tables, qa_questions, LIST_QA_SOLVERS))),
        "list_verification.txt": code_template(
            TabularFormat.LIST, "verification", CODE_VERIF_INSTRUCTION,
            CODE_VERIF_CLOSING,
            list(zip(verif_tables, verif_questions, LIST_VERIF_SOLVERS))),
        "pandas_qa.txt": code_template(
            TabularFormat.PANDAS, "qa", CODE_QA_INSTRUCTION, CODE_QA_CLOSING,
            list(zip(qa_tables, qa_questions, PANDAS_QA_SOLVERS))),
        "pandas_verification.txt": code_template(
            TabularFormat.PANDAS, "verification", CODE_VERIF_INSTRUCTION,
            CODE_VERIF_CLOSING,
            list(zip(verif_tables, verif_questions, PANDAS_VERIF_SOLVERS))),
        "database_qa.txt": database_template(
            "qa", list(zip(DB_QA_TABLES, DB_QA_QUESTIONS, DB_QA_SQL))),
        "database_verification.txt": database_template(
            "verification",
            list(zip(verif_tables, verif_questions, DB_VERIF_SQL))),
    }

    # Unified mode swaps only the Database QA demonstrations for ones that
    # reuse the same four tables as the other formats.
    unified = dict(per_format)
    unified["database_qa.txt"] = database_template(
        "qa", list(zip(qa_tables, qa_questions, DB_UNIFIED_SQL)))
    return {"per_format": per_format, "unified": unified}


def main() -> None:
    for mode, files in build_all().items():
        directory = OUT / mode
        directory.mkdir(parents=True, exist_ok=True)
        for name, text in sorted(files.items()):
            (directory / name).write_text(text, encoding="utf-8")
            print(f"wrote templates/{mode}/{name}")


if __name__ == "__main__":
    main()
