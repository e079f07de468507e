"""Regenerate the packaged data fixtures (synthetic corpus, catalog, questions)."""

import json
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "persona_workbench" / "data"

HEADER = {
    "schema_version": 1,
    "label_aliases": {"Independent Living/Employment": ["Employment"]},
}

RECORDS = [
    {
        "record_id": "R-EMP-01",
        "name": "Maya Tan",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/maya-tan",
        "age": 28,
        "gender": "Female",
        "region": "Canada",
        "education": "High school diploma with resource-room support",
        "occupation": "Supermarket cashier",
        "family_situation": "Lives with her parents and a younger brother",
        "labels": ["Employment"],
        "abilities_text": {
            "Employment": "Memory skills carry me through my shifts. I use color-coded labels on the register keys and a laminated checklist for opening tasks, and once I practice a routine twice I can repeat it without help. My manager says I am the most reliable person on the schedule."
        },
        "challenges_text": "Long spoken instructions overwhelm me; I ask people to show me once or write the steps down.",
    },
    {
        "record_id": "R-EMP-02",
        "name": "Diego Alvarez",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/diego-alvarez",
        "age": 35,
        "gender": "Male",
        "region": "United States",
        "education": "Vocational baking certificate",
        "occupation": "Bakery assistant",
        "family_situation": "Shares an apartment with a roommate, parents nearby",
        "labels": ["Employment"],
        "abilities_text": {
            "Employment": "Teamwork is my strength at the bakery. I set the timers, my coworker pulls the trays, and good teamwork keeps the morning on track. Having Down syndrome never stopped me from learning new skills, because patient teamwork makes every new skill stick."
        },
        "challenges_text": "Loud rush hours make it hard to focus, so I wear one earplug and take my break early.",
    },
    {
        "record_id": "R-EMP-03",
        "name": "Priya Nair",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/priya-nair",
        "age": 24,
        "gender": "Female",
        "region": "India",
        "education": "Inclusive secondary school, office skills workshop",
        "occupation": "Office clerk",
        "family_situation": "Lives with her aunt in the city during the work week",
        "labels": ["Independent Living/Employment"],
        "abilities_text": {
            "Employment": "I scan and file documents faster than anyone on my floor. A schedule app with picture reminders keeps my day organized, and I take pride in supporting the whole office with tidy records."
        },
        "challenges_text": "Reading dense forms takes me extra time, so I highlight the fields I need first.",
    },
    {
        "record_id": "R-EMP-04",
        "name": "Sean Murphy",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/sean-murphy",
        "age": 41,
        "gender": "Male",
        "region": "Ireland",
        "education": "Occupational training programme after secondary school",
        "occupation": "Grocery stocker",
        "family_situation": "Supportive parents, visits his sister on weekends",
        "labels": ["Employment"],
        "abilities_text": {
            "Employment": "I have shown a strong work ethic for twenty years of stocking shelves. Customers know me by name because I greet everyone, and the strength and stamina I built lets me handle the heavy deliveries."
        },
        "challenges_text": "I cannot drive, so I plan my bus route the night before every shift.",
    },
    {
        "record_id": "R-EDU-01",
        "name": "Lena Kovacs",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/lena-kovacs",
        "age": 16,
        "gender": "Female",
        "region": "Hungary",
        "education": "Inclusive secondary school, year 10",
        "occupation": "Student",
        "family_situation": "Lives with both parents and a grandmother",
        "labels": ["Education"],
        "abilities_text": {
            "Education": "Reading opens up when my tutor pairs pictures with the words. We read the same story twice, then I retell it in my own words, and my retelling gets longer every month. I love showing my class what I learned."
        },
        "challenges_text": "Timed tests make me freeze; extra minutes and a quiet corner change everything.",
    },
    {
        "record_id": "R-EDU-02",
        "name": "Tom Becker",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/tom-becker",
        "age": 19,
        "gender": "Male",
        "region": "Germany",
        "education": "Vocational school, hospitality track",
        "occupation": "Vocational student",
        "family_situation": "Lives at home, older sister studies nearby",
        "labels": ["Education"],
        "abilities_text": {
            "Education": "Practice tests are my secret weapon. My speech therapist taught me to read questions aloud slowly, and now I explain the service rules to new classmates. Repetition turns hard material into skills I keep."
        },
        "challenges_text": "New vocabulary needs many repetitions before it sticks, so I keep a word notebook.",
    },
    {
        "record_id": "R-EDU-03",
        "name": "Amara Okafor",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/amara-okafor",
        "age": 14,
        "gender": "Female",
        "region": "Nigeria",
        "education": "Middle school with a learning support teacher",
        "occupation": "Student",
        "family_situation": "Big family, three siblings, mother teaches at her school",
        "labels": ["Education"],
        "abilities_text": {
            "Education": "Counting games and music lessons are where I shine. I keep the beat for the whole music class, and drumming patterns helped my math: I count in groups now, which made multiplication finally make sense."
        },
        "challenges_text": "Copying long passages from the board tires my hand, so the teacher gives me printed notes.",
    },
    {
        "record_id": "R-EDU-04",
        "name": "Jonas Lind",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/jonas-lind",
        "age": 21,
        "gender": "Male",
        "region": "Sweden",
        "education": "Adult literacy course at the community college",
        "occupation": "Adult learner and library volunteer",
        "family_situation": "Lives in supported housing, close to his mother",
        "labels": ["Education"],
        "abilities_text": {
            "Education": "Flashcards and a fixed study hour every evening made me the most consistent learner in my course. I sort the library returns alphabetically as practice, and my reading level climbed two grades in a year."
        },
        "challenges_text": "Crowded classrooms distract me, so I sit in the front row with my back to the noise.",
    },
    {
        "record_id": "R-FAM-01",
        "name": "Rosa Mendes",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/rosa-mendes",
        "age": 30,
        "gender": "Female",
        "region": "Brazil",
        "education": "Completed inclusive secondary school",
        "occupation": "Helps run the family kitchen",
        "family_situation": "Lives with her sister and two nephews",
        "labels": ["Family"],
        "abilities_text": {
            "Family": "Cooking with my sister is how I care for everyone. I follow picture recipes, chop everything evenly, and the picture schedule on the fridge keeps our whole week of family meals organized around me."
        },
        "challenges_text": "Sudden plan changes upset me; my sister warns me a day ahead when something moves.",
    },
    {
        "record_id": "R-FAM-02",
        "name": "Ethan Cole",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/ethan-cole",
        "age": 12,
        "gender": "Male",
        "region": "United States",
        "education": "Elementary school, inclusive classroom",
        "occupation": "Student",
        "family_situation": "Youngest of three brothers",
        "labels": ["Family"],
        "abilities_text": {
            "Family": "Game night is mine to run. I learned the rules of every board game in the house, I teach them to my brothers, and I sign the funny parts for my oldest brother who taught me sign language."
        },
        "challenges_text": "Losing a game used to end in tears; now we shake hands and I pick the next game.",
    },
    {
        "record_id": "R-FAM-03",
        "name": "Nadia Haddad",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/nadia-haddad",
        "age": 26,
        "gender": "Female",
        "region": "Lebanon",
        "education": "Secondary school with community support classes",
        "occupation": "Family caregiver and market helper",
        "family_situation": "Lives with her grandmother and helps her daily",
        "labels": ["Family"],
        "abilities_text": {
            "Family": "I keep my grandmother's medicine schedule on phone reminders and never miss a dose. We share the chores: she washes, I dry and sort. Caring for her taught me patience my whole family leans on."
        },
        "challenges_text": "Reading medicine labels is hard, so the pharmacist marks each box with a colored sticker.",
    },
    {
        "record_id": "R-FAM-04",
        "name": "Oliver Price",
        "diagnosis": "Down Syndrome",
        "resources": "https://example.org/stories/oliver-price",
        "age": 33,
        "gender": "Male",
        "region": "United Kingdom",
        "education": "College life-skills programme",
        "occupation": "Cafe barista",
        "family_situation": "Moved into his own flat ten minutes from his parents",
        "labels": ["Family"],
        "abilities_text": {
            "Family": "Sunday video calls are my tradition: I call my parents, show them what I cooked, and we plan the week. Budgeting with my dad each month means my flat runs on my own money and my own rules."
        },
        "challenges_text": "Paperwork from the council confuses me, so my dad and I open the post together.",
    },
]

CATALOG = [
    {
        "theme": "Employment",
        "name": "Memory Skills",
        "description": "Hi! I have exceptional memory skills that greatly aid me in my work. Despite the challenges posed by Down syndrome, I can effectively retain and recall information, enabling me to perform tasks with accuracy and efficiency. This proficiency enhances my productivity and reliability in my role.",
        "drivers": [
            {
                "name": "Visual and Auditory aids",
                "story": "In my workspace, I use visual aids like color-coded labels and auditory aids like recorded instructions. For instance, I have labels with pictures on the storage boxes and listen to instructions on my device. These aids provide strong cues that help me remember important details and perform my tasks accurately.",
            }
        ],
        "blockers": [
            {
                "name": "Complex Information",
                "story": "When I encounter complex information, it can be challenging for me to process and retain it. I remember a time when I had to learn a detailed procedure for a new task. It was overwhelming until my supervisor broke it down into simpler steps, which made it easier for me to understand and remember.",
            }
        ],
    },
    {
        "theme": "Employment",
        "name": "Teamwork",
        "description": "Hi! I work best shoulder to shoulder with my coworkers. When we split a job into parts and check in with each other, I hold up my end every single time, and my team knows they can count on me.",
        "drivers": [
            {
                "name": "Clear shared roles",
                "story": "At the bakery we each own one station. Knowing the timers are mine and the trays are my coworker's means nobody trips over anybody, and our mornings run like clockwork.",
            }
        ],
        "blockers": [
            {
                "name": "Unspoken expectations",
                "story": "Once a new supervisor assumed I would just know the closing routine. Nobody said it out loud, so I missed steps. When she finally walked it through with me once, I never missed it again.",
            }
        ],
    },
    {
        "theme": "Employment",
        "name": "Routine Mastery",
        "description": "Hi! Give me a routine and a little practice, and I will run it more consistently than anyone. Repetition is not boring to me; it is how I turn a job into something I own.",
        "drivers": [
            {
                "name": "Practice runs",
                "story": "Before my first solo shift, my manager let me rehearse the opening routine three times with her watching. By the third run I was correcting her. That rehearsal made the real thing easy.",
            }
        ],
        "blockers": [
            {
                "name": "Sudden schedule changes",
                "story": "When my shift moved an hour earlier without warning, my whole morning plan collapsed and I arrived flustered. A text the night before is all I need to arrive calm and ready.",
            }
        ],
    },
    {
        "theme": "Education",
        "name": "Reading with Support",
        "description": "Hi! I am a reader, and I get stronger every month. Pair the words with pictures, give me a patient tutor, and I will read you the whole story back in my own words.",
        "drivers": [
            {
                "name": "Picture-paired texts",
                "story": "My tutor puts a small picture above the tricky words. After two passes I do not need the pictures anymore, and retelling the story is my favorite part of the lesson.",
            }
        ],
        "blockers": [
            {
                "name": "Timed pressure",
                "story": "A ticking clock makes the letters swim. When my teacher gives me the same test untimed in a quiet corner, I finish every question and usually get them right.",
            }
        ],
    },
    {
        "theme": "Education",
        "name": "Focused Practice",
        "description": "Hi! Repetition is my superpower at school. What takes my classmates one pass takes me five, but after five passes I keep it forever, and I will happily explain it to the next student.",
        "drivers": [
            {
                "name": "Daily study hour",
                "story": "Every evening at seven I sit at the kitchen table with my flashcards. The fixed hour means nobody has to remind me, and my quiz scores climbed all year because of it.",
            }
        ],
        "blockers": [
            {
                "name": "Noisy classrooms",
                "story": "When the room buzzes, the lesson slips away from me. Sitting in the front row with my back to the noise, or a seat in the quiet room, brings my focus right back.",
            }
        ],
    },
    {
        "theme": "Education",
        "name": "Asking for Help",
        "description": "Hi! I know exactly when I am stuck and I am not shy about it. Raising my hand early saves me from an hour of frustration, and my teachers say they wish everyone did it.",
        "drivers": [
            {
                "name": "A named go-to person",
                "story": "My school gave me one support teacher I can always find at the same desk. Knowing exactly who to ask and where means I actually ask instead of sitting stuck.",
            }
        ],
        "blockers": [
            {
                "name": "Fear of slowing the class",
                "story": "In a big lecture I once stayed quiet because everyone seemed busy. I fell a whole chapter behind. A hand signal my teacher and I agreed on lets me flag for help without a word.",
            }
        ],
    },
    {
        "theme": "Family",
        "name": "Shared Routines",
        "description": "Hi! Our family runs on routines I help build. The picture schedule on the fridge is mine: meals, chores, game night. When the week follows the plan, I am the engine of this house.",
        "drivers": [
            {
                "name": "Picture schedules",
                "story": "I drew the icons for our fridge schedule myself. Everyone checks it, even my dad. Seeing the whole week in pictures means I start chores before anyone asks.",
            }
        ],
        "blockers": [
            {
                "name": "Last-minute changes",
                "story": "When dinner plans changed while I was already cooking, I shut down for the evening. Now my sister tells me a day ahead, and I move the pictures on the schedule myself, which makes the change mine.",
            }
        ],
    },
    {
        "theme": "Family",
        "name": "Caring Communication",
        "description": "Hi! I am the one who notices how everyone at home is feeling. A hug at the right moment, a reminder call, the patience to listen twice: that is what I bring to my family.",
        "drivers": [
            {
                "name": "Regular check-in calls",
                "story": "Every Sunday I video call my parents and show them my week. The fixed time means we never drift apart, and they say my calls are the anchor of their weekend.",
            }
        ],
        "blockers": [
            {
                "name": "Being talked over",
                "story": "At big family dinners everyone talks at once and my words get lost. When my brother passes me the salt shaker as our talking stick, the table hears my whole story.",
            }
        ],
    },
    {
        "theme": "Family",
        "name": "Celebrating Together",
        "description": "Hi! Birthdays, match days, the first mango of the season: I turn them all into celebrations. My family says I remember every date that matters and make each one feel special.",
        "drivers": [
            {
                "name": "A calendar of occasions",
                "story": "I keep a big paper calendar with a sticker on every birthday and holiday. I start the preparations early, so nothing sneaks up on us and nobody is ever forgotten.",
            }
        ],
        "blockers": [
            {
                "name": "Crowded, loud parties",
                "story": "Huge noisy parties wear me out fast. A quiet corner where I can take a breather, and a heads-up about who is coming, lets me enjoy the whole celebration with everyone.",
            }
        ],
    },
]

QUESTIONS = [
    {"theme": "Employment", "text": "What motivates you to learn new skills, especially those related to your job?"},
    {"theme": "Employment", "text": "What kind of support helped you most when you were looking for a job?"},
    {"theme": "Employment", "text": "What does a manager do that makes a workplace feel right for you?"},
    {"theme": "Employment", "ability": "Memory Skills", "text": "What helps you remember the steps of a new task at work?"},
    {"theme": "Employment", "ability": "Memory Skills", "text": "Can you tell me about a time visual aids made your job easier?"},
    {"theme": "Employment", "ability": "Teamwork", "text": "How do your coworkers support you during a busy shift?"},
    {"theme": "Employment", "ability": "Routine Mastery", "text": "How do you learn a new routine until it feels like yours?"},
    {"theme": "Education", "text": "What does a good day at school look like for you?"},
    {"theme": "Education", "text": "Which learning methods work best for you, and who discovered them?"},
    {"theme": "Education", "ability": "Reading with Support", "text": "Who helps you when a text is hard to read, and how?"},
    {"theme": "Education", "ability": "Focused Practice", "text": "How do you practice something new until it sticks?"},
    {"theme": "Education", "ability": "Asking for Help", "text": "How do you let a teacher know you are stuck?"},
    {"theme": "Family", "text": "How do you and your family share the chores at home?"},
    {"theme": "Family", "text": "What family traditions matter most to you?"},
    {"theme": "Family", "ability": "Shared Routines", "text": "How do picture schedules help your week go smoothly?"},
    {"theme": "Family", "ability": "Caring Communication", "text": "How does your family make sure your voice is heard?"},
    {"theme": "Family", "ability": "Celebrating Together", "text": "What celebration are you proudest of organizing?"},
]


def write_jsonl(path: Path, rows: list[dict]) -> None:
    path.write_text(
        "\n".join(json.dumps(row, ensure_ascii=False) for row in rows) + "\n",
        encoding="utf-8",
    )


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    write_jsonl(DATA / "story_corpus.jsonl", [HEADER, *RECORDS])
    write_jsonl(DATA / "ability_catalog.jsonl", CATALOG)
    write_jsonl(DATA / "question_bank.jsonl", QUESTIONS)
    print(f"wrote fixtures to {DATA}")


if __name__ == "__main__":
    main()
