//! Training text for the built-in trigram profiles. Each sample is ordinary
//! news-register prose; profiles are derived from it on first use.

pub(super) const SAMPLES: &[(&str, &str)] = &[
    ("en", EN),
    ("de", DE),
    ("fr", FR),
    ("es", ES),
    ("pt", PT),
    ("it", IT),
    ("nl", NL),
    ("ru", RU_TRANSLIT),
];

const EN: &str = "The government announced on Tuesday that it would increase funding for public \
hospitals after months of pressure from doctors and nurses who warned that the health system was \
close to breaking point. The minister said the additional money would be used to hire more staff, \
reduce waiting times and repair buildings that have been neglected for years. Opposition leaders \
welcomed the decision but said it came too late for many patients. In a statement released \
yesterday, the company said its profits had fallen sharply during the third quarter because of \
rising energy costs and weaker demand from customers in Europe and Asia. Shares dropped by more \
than ten percent in early trading. Analysts had expected a smaller decline, and several investors \
said they were worried about the outlook for next year. Police are asking for help from the public \
after a man was seriously injured in an attack near the city centre on Saturday night. Officers \
believe that the victim was walking home with friends when he was approached by a group of young \
people. Anyone with information should contact the police as soon as possible. Scientists have \
discovered a new species of frog in the rainforest, according to a study published this week. The \
researchers spent three years collecting samples and recording the sounds of the animals, which are \
only found in a small area of the mountains. They warned that the habitat is under threat from \
logging and climate change. The team will win the league if they beat their rivals at home next \
weekend, the coach told reporters after the match. He praised his players for their hard work and \
said that the fans had played an important role throughout the season. Voters in the region will go \
to the polls in November to choose a new mayor, and the latest survey shows that the race is still \
very close between the two main candidates. Both of them have promised to build more homes, improve \
public transport and make the streets safer for families and children.";

const DE: &str = "Die Bundesregierung hat am Dienstag angekündigt, die Mittel für öffentliche \
Krankenhäuser deutlich zu erhöhen, nachdem Ärzte und Pflegekräfte monatelang vor einem \
Zusammenbruch des Gesundheitssystems gewarnt hatten. Der Minister sagte, das zusätzliche Geld solle \
für neues Personal, kürzere Wartezeiten und die Sanierung von Gebäuden verwendet werden, die seit \
Jahren vernachlässigt worden seien. Die Opposition begrüßte die Entscheidung, kritisierte aber, \
dass sie für viele Patienten zu spät komme. In einer Mitteilung erklärte das Unternehmen, der \
Gewinn sei im dritten Quartal wegen steigender Energiekosten und einer schwächeren Nachfrage aus \
Europa und Asien stark gesunken. Die Aktie verlor im frühen Handel mehr als zehn Prozent. Die \
Polizei bittet die Bevölkerung um Hinweise, nachdem ein Mann am Samstagabend in der Nähe der \
Innenstadt schwer verletzt worden ist. Die Beamten gehen davon aus, dass das Opfer mit Freunden auf \
dem Heimweg war, als es von einer Gruppe junger Leute angesprochen wurde. Wissenschaftler haben im \
Regenwald eine neue Froschart entdeckt, wie aus einer in dieser Woche veröffentlichten Studie \
hervorgeht. Die Forscher sammelten drei Jahre lang Proben und nahmen die Rufe der Tiere auf, die \
nur in einem kleinen Gebiet der Berge vorkommen. Sie warnten, dass der Lebensraum durch Abholzung \
und den Klimawandel bedroht sei. Die Mannschaft wird die Meisterschaft gewinnen, wenn sie am \
nächsten Wochenende zu Hause gegen den Rivalen siegt, sagte der Trainer nach dem Spiel. Er lobte \
seine Spieler für ihre harte Arbeit und sagte, die Fans hätten während der ganzen Saison eine \
wichtige Rolle gespielt. Die Wähler in der Region sind im November aufgerufen, einen neuen \
Bürgermeister zu wählen, und nach der jüngsten Umfrage ist das Rennen zwischen den beiden \
Kandidaten noch immer sehr knapp. Beide haben versprochen, mehr Wohnungen zu bauen, den \
öffentlichen Verkehr zu verbessern und die Straßen für Familien und Kinder sicherer zu machen.";

const FR: &str = "Le gouvernement a annoncé mardi qu'il allait augmenter le financement des \
hôpitaux publics après des mois de pression de la part des médecins et des infirmières, qui \
avertissaient que le système de santé était au bord de la rupture. Le ministre a déclaré que \
l'argent supplémentaire servirait à recruter du personnel, à réduire les délais d'attente et à \
rénover des bâtiments négligés depuis des années. Les dirigeants de l'opposition ont salué la \
décision, tout en estimant qu'elle arrivait trop tard pour de nombreux patients. Dans un \
communiqué publié hier, l'entreprise a indiqué que ses bénéfices avaient fortement reculé au \
troisième trimestre en raison de la hausse des coûts de l'énergie et d'une demande plus faible en \
Europe et en Asie. L'action a perdu plus de dix pour cent en début de séance. La police lance un \
appel à témoins après qu'un homme a été grièvement blessé lors d'une agression près du centre-ville \
samedi soir. Les enquêteurs pensent que la victime rentrait chez elle avec des amis lorsqu'elle a \
été abordée par un groupe de jeunes. Des scientifiques ont découvert une nouvelle espèce de \
grenouille dans la forêt tropicale, selon une étude publiée cette semaine. Les chercheurs ont passé \
trois ans à recueillir des échantillons et à enregistrer les chants de ces animaux, que l'on ne \
trouve que dans une petite zone des montagnes. Ils ont averti que leur habitat est menacé par \
l'exploitation forestière et le changement climatique. L'équipe remportera le championnat si elle \
bat son rival à domicile le week-end prochain, a déclaré l'entraîneur aux journalistes après le \
match. Il a félicité ses joueurs pour leur travail et a souligné le rôle important des supporters \
tout au long de la saison. Les électeurs de la région voteront en novembre pour choisir un nouveau \
maire, et le dernier sondage montre que la course reste très serrée entre les deux principaux \
candidats, qui ont promis de construire davantage de logements et d'améliorer les transports.";

const ES: &str = "El Gobierno anunció el martes que aumentará la financiación de los hospitales \
públicos después de meses de presión por parte de médicos y enfermeras, que advertían de que el \
sistema sanitario estaba al borde del colapso. El ministro dijo que el dinero adicional se \
destinará a contratar más personal, reducir las listas de espera y reparar edificios que llevan \
años abandonados. Los líderes de la oposición celebraron la decisión, pero afirmaron que llega \
demasiado tarde para muchos pacientes. En un comunicado publicado ayer, la empresa informó de que \
sus beneficios cayeron con fuerza durante el tercer trimestre debido al aumento de los costes de \
la energía y a una demanda más débil en Europa y Asia. Las acciones bajaron más de un diez por \
ciento en las primeras horas de la sesión. La policía pide la colaboración ciudadana después de \
que un hombre resultara herido de gravedad en una agresión cerca del centro de la ciudad el sábado \
por la noche. Los agentes creen que la víctima volvía a casa con unos amigos cuando fue abordada \
por un grupo de jóvenes. Un equipo de científicos ha descubierto una nueva especie de rana en la \
selva tropical, según un estudio publicado esta semana. Los investigadores pasaron tres años \
recogiendo muestras y grabando los sonidos de estos animales, que solo se encuentran en una pequeña \
zona de las montañas. Advirtieron de que su hábitat está amenazado por la tala y el cambio \
climático. El equipo ganará la liga si vence a su rival en casa el próximo fin de semana, dijo el \
entrenador a los periodistas tras el partido. Elogió a sus jugadores por su esfuerzo y aseguró que \
la afición ha tenido un papel muy importante durante toda la temporada. Los votantes de la región \
acudirán a las urnas en noviembre para elegir a un nuevo alcalde, y la última encuesta muestra que \
la carrera sigue muy igualada entre los dos principales candidatos, que han prometido construir \
más viviendas y mejorar el transporte público.";

const PT: &str = "O governo anunciou na terça-feira que vai aumentar o financiamento dos \
hospitais públicos depois de meses de pressão de médicos e enfermeiros, que alertavam que o sistema \
de saúde estava à beira do colapso. O ministro disse que o dinheiro adicional será usado para \
contratar mais funcionários, reduzir o tempo de espera e reparar edifícios que foram abandonados \
durante anos. Os líderes da oposição elogiaram a decisão, mas afirmaram que ela chega tarde demais \
para muitos pacientes. Em comunicado divulgado ontem, a empresa informou que os seus lucros caíram \
fortemente no terceiro trimestre por causa do aumento dos custos de energia e da procura mais fraca \
na Europa e na Ásia. As ações recuaram mais de dez por cento no início do pregão. A polícia pede a \
ajuda da população depois que um homem ficou gravemente ferido numa agressão perto do centro da \
cidade no sábado à noite. Os investigadores acreditam que a vítima voltava para casa com amigos \
quando foi abordada por um grupo de jovens. Cientistas descobriram uma nova espécie de sapo na \
floresta tropical, segundo um estudo publicado esta semana. Os pesquisadores passaram três anos \
recolhendo amostras e gravando os sons dos animais, que só existem numa pequena área das montanhas. \
Eles alertaram que o habitat está ameaçado pelo desmatamento e pelas mudanças climáticas. A equipe \
vai conquistar o campeonato se vencer o rival em casa no próximo fim de semana, disse o treinador \
aos jornalistas depois da partida. Ele elogiou os jogadores pelo trabalho e afirmou que os \
torcedores tiveram um papel importante ao longo de toda a temporada. Os eleitores da região vão às \
urnas em novembro para escolher um novo prefeito, e a pesquisa mais recente mostra que a disputa \
continua muito equilibrada entre os dois principais candidatos, que prometeram construir mais \
moradias e melhorar o transporte público para as famílias.";

const IT: &str = "Il governo ha annunciato martedì che aumenterà i finanziamenti per gli ospedali \
pubblici dopo mesi di pressioni da parte di medici e infermieri, che avvertivano che il sistema \
sanitario era vicino al collasso. Il ministro ha detto che i fondi aggiuntivi serviranno ad \
assumere nuovo personale, ridurre i tempi di attesa e ristrutturare edifici trascurati da anni. I \
leader dell'opposizione hanno accolto con favore la decisione, ma hanno affermato che arriva troppo \
tardi per molti pazienti. In una nota diffusa ieri, la società ha reso noto che gli utili sono \
calati bruscamente nel terzo trimestre a causa dell'aumento dei costi dell'energia e di una domanda \
più debole in Europa e in Asia. Il titolo ha perso più del dieci per cento nelle prime ore di \
contrattazione. La polizia chiede l'aiuto dei cittadini dopo che un uomo è rimasto gravemente \
ferito in un'aggressione vicino al centro della città sabato sera. Gli agenti ritengono che la \
vittima stesse tornando a casa con alcuni amici quando è stata avvicinata da un gruppo di giovani. \
Gli scienziati hanno scoperto una nuova specie di rana nella foresta pluviale, secondo uno studio \
pubblicato questa settimana. I ricercatori hanno trascorso tre anni a raccogliere campioni e a \
registrare i versi degli animali, che vivono soltanto in una piccola zona delle montagne. Hanno \
avvertito che il loro habitat è minacciato dal disboscamento e dai cambiamenti climatici. La \
squadra vincerà il campionato se batterà i rivali in casa il prossimo fine settimana, ha detto \
l'allenatore ai giornalisti dopo la partita. Ha elogiato i suoi giocatori per il loro impegno e ha \
sottolineato il ruolo importante dei tifosi durante tutta la stagione. Gli elettori della regione \
andranno alle urne a novembre per scegliere un nuovo sindaco, e l'ultimo sondaggio mostra che la \
corsa è ancora molto serrata tra i due principali candidati, che hanno promesso di costruire più \
case e di migliorare i trasporti pubblici per le famiglie.";

const NL: &str = "De regering heeft dinsdag aangekondigd dat ze de financiering van openbare \
ziekenhuizen gaat verhogen, na maandenlange druk van artsen en verpleegkundigen die waarschuwden \
dat het zorgstelsel op instorten stond. De minister zei dat het extra geld wordt gebruikt om meer \
personeel aan te nemen, de wachttijden te verkorten en gebouwen te herstellen die jarenlang zijn \
verwaarloosd. Oppositieleiders waren blij met het besluit, maar zeiden dat het voor veel patiënten \
te laat komt. In een verklaring die gisteren werd gepubliceerd, meldde het bedrijf dat de winst in \
het derde kwartaal sterk is gedaald door de stijgende energiekosten en een zwakkere vraag van \
klanten in Europa en Azië. Het aandeel verloor in de vroege handel meer dan tien procent. De \
politie vraagt het publiek om hulp nadat een man zaterdagavond bij een aanval in de buurt van het \
centrum ernstig gewond is geraakt. Agenten denken dat het slachtoffer met vrienden op weg naar huis \
was toen hij werd aangesproken door een groep jongeren. Wetenschappers hebben in het regenwoud een \
nieuwe kikkersoort ontdekt, blijkt uit een onderzoek dat deze week is verschenen. De onderzoekers \
hebben drie jaar lang monsters verzameld en de geluiden van de dieren opgenomen, die alleen in een \
klein gebied in de bergen voorkomen. Zij waarschuwen dat het leefgebied wordt bedreigd door houtkap \
en klimaatverandering. Het team wordt kampioen als het volgend weekend thuis van de rivaal wint, \
zei de trainer na de wedstrijd tegen verslaggevers. Hij prees zijn spelers voor hun harde werk en \
zei dat de supporters het hele seizoen een belangrijke rol hebben gespeeld. De kiezers in de regio \
gaan in november naar de stembus om een nieuwe burgemeester te kiezen, en uit de laatste peiling \
blijkt dat de strijd tussen de twee belangrijkste kandidaten nog altijd erg spannend is. Beiden \
hebben beloofd meer woningen te bouwen en het openbaar vervoer te verbeteren.";

const RU_TRANSLIT: &str = "Pravitelstvo vo vtornik obyavilo, chto uvelichit finansirovanie \
gosudarstvennykh bolnits posle neskolkikh mesyatsev davleniya so storony vrachei i medsester, \
kotorye preduprezhdali, chto sistema zdravookhraneniya nakhoditsya na grani krizisa. Ministr \
zayavil, chto dopolnitelnye dengi budut potracheny na nabor personala, sokrashchenie ocheredei i \
remont zdanii, kotorye mnogo let ne remontirovalis. Predstaviteli oppozitsii privetstvovali eto \
reshenie, no skazali, chto ono prinyato slishkom pozdno dlya mnogikh patsientov. V zayavlenii, \
opublikovannom vchera, kompaniya soobshchila, chto ee pribyl rezko snizilas v tretem kvartale iz-za \
rosta tsen na energiyu i slabogo sprosa v Evrope i Azii. Aktsii podesheveli bolee chem na desyat \
protsentov v nachale torgov. Politsiya prosit pomoshchi u zhitelei posle togo, kak v subbotu vecherom \
nedaleko ot tsentra goroda byl tyazhelo ranen muzhchina. Sledovateli schitayut, chto postradavshii \
vozvrashchalsya domoi s druzyami, kogda k nemu podoshla gruppa molodykh lyudei. Uchenye obnaruzhili v \
tropicheskom lesu novyi vid lyagushek, govoritsya v issledovanii, opublikovannom na etoi nedele. \
Issledovateli tri goda sobirali obraztsy i zapisyvali zvuki zhivotnykh, kotorye vstrechayutsya \
tolko na nebolshom uchastke v gorakh. Oni predupredili, chto sreda obitaniya nakhoditsya pod ugrozoi \
iz-za vyrubki lesov i izmeneniya klimata. Komanda vyigraet chempionat, esli pobedit sopernika doma v \
sleduyushchie vykhodnye, skazal trener zhurnalistam posle matcha. On pokhvalil svoikh igrokov za \
uporstvo i otmetil, chto bolelshchiki igrali vazhnuyu rol na protyazhenii vsego sezona. Izbirateli \
regiona v noyabre vyberut novogo mera, i poslednii opros pokazyvaet, chto borba mezhdu dvumya \
osnovnymi kandidatami ostaetsya ochen naprezhennoi. Oba kandidata obeshchali postroit bolshe zhilya i \
uluchshit rabotu obshchestvennogo transporta dlya semei s detmi.";
