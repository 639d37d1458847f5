#include "curator/lang_detect.hpp"

namespace curator {

// Seed sentences for the bundled detector, a dozen or so per language in a
// plain encyclopedic register. Held-out validation sentences live in the
// test suite, not here.

namespace {

constexpr std::string_view kEnglish = R"(The river flows through the old town and past the stone bridge that was built more than two hundred years ago.
Scientists have found that regular sleep improves memory, attention, and the ability to learn new skills.
The library opens early in the morning and stays open until late in the evening during the school year.
Most of the houses in the village were built from local timber and have steep roofs against the winter snow.
She walked along the shore every day, watching the boats come back with the evening tide.
The committee agreed to publish the report after the council had reviewed the figures for the third time.
Farmers in the region grow wheat and barley, and many families also keep a small herd of cattle.
The museum's new wing contains paintings, sculptures, and a collection of early photographs of the city.
When the weather turns cold, the birds fly south and the forest becomes quiet for several months.
The engineers tested the bridge under heavy load before it was opened to traffic in the spring.
History shows that small changes in climate have often had large effects on harvests and trade.
The children learned to read during the long winters, and many of them later studied at the university.
A narrow road climbs from the harbour to the lighthouse, which still guides ships past the rocks.
The government announced a new plan to improve the railways between the capital and the northern cities.)";

constexpr std::string_view kGerman = R"(Der Fluss fließt durch die alte Stadt und unter der steinernen Brücke hindurch, die vor langer Zeit gebaut wurde.
Wissenschaftler haben gezeigt, dass regelmäßiger Schlaf das Gedächtnis und die Aufmerksamkeit deutlich verbessert.
Die Bibliothek öffnet früh am Morgen und bleibt während des Schuljahres bis spät am Abend geöffnet.
Die meisten Häuser im Dorf wurden aus Holz gebaut und haben steile Dächer gegen den Schnee im Winter.
Sie ging jeden Tag am Ufer entlang und beobachtete die Boote, die mit der Flut zurückkehrten.
Der Ausschuss beschloss, den Bericht zu veröffentlichen, nachdem der Rat die Zahlen geprüft hatte.
Die Bauern der Region bauen Weizen und Gerste an, und viele Familien halten außerdem einige Rinder.
Der neue Flügel des Museums zeigt Gemälde, Skulpturen und eine Sammlung früher Fotografien der Stadt.
Wenn das Wetter kalt wird, ziehen die Vögel nach Süden, und der Wald wird für mehrere Monate still.
Die Ingenieure prüften die Brücke unter schwerer Last, bevor sie im Frühjahr für den Verkehr geöffnet wurde.
Die Geschichte zeigt, dass kleine Veränderungen des Klimas oft große Folgen für Ernte und Handel hatten.
Die Kinder lernten in den langen Wintern lesen, und viele von ihnen studierten später an der Universität.
Eine schmale Straße führt vom Hafen hinauf zum Leuchtturm, der die Schiffe noch immer an den Felsen vorbeiführt.
Die Regierung kündigte einen neuen Plan an, um die Eisenbahn zwischen der Hauptstadt und dem Norden auszubauen.)";

constexpr std::string_view kFrench = R"(La rivière traverse la vieille ville et passe sous le pont de pierre qui fut construit il y a plus de deux siècles.
Les chercheurs ont montré que le sommeil régulier améliore la mémoire, l'attention et la capacité d'apprendre.
La bibliothèque ouvre tôt le matin et reste ouverte jusqu'à tard le soir pendant l'année scolaire.
La plupart des maisons du village ont été construites en bois et possèdent des toits pentus contre la neige.
Elle marchait chaque jour le long du rivage en regardant les bateaux revenir avec la marée du soir.
Le comité a décidé de publier le rapport après que le conseil eut examiné les chiffres une troisième fois.
Les paysans de la région cultivent le blé et l'orge, et beaucoup de familles élèvent aussi quelques vaches.
La nouvelle aile du musée présente des peintures, des sculptures et une collection de photographies anciennes.
Quand le temps devient froid, les oiseaux partent vers le sud et la forêt reste silencieuse plusieurs mois.
Les ingénieurs ont testé le pont sous une lourde charge avant son ouverture à la circulation au printemps.
L'histoire montre que de petits changements du climat ont souvent eu de grands effets sur les récoltes.
Les enfants apprenaient à lire pendant les longs hivers, et beaucoup étudièrent plus tard à l'université.
Une route étroite monte du port vers le phare, qui guide encore les navires au large des rochers.
Le gouvernement a annoncé un nouveau plan pour améliorer les chemins de fer entre la capitale et le nord.)";

constexpr std::string_view kSpanish = R"(El río atraviesa la ciudad vieja y pasa bajo el puente de piedra que fue construido hace más de dos siglos.
Los científicos han demostrado que dormir bien mejora la memoria, la atención y la capacidad de aprender.
La biblioteca abre temprano por la mañana y permanece abierta hasta tarde durante el curso escolar.
La mayoría de las casas del pueblo fueron construidas con madera local y tienen tejados inclinados contra la nieve.
Ella caminaba cada día por la orilla, mirando los barcos que volvían con la marea de la tarde.
El comité acordó publicar el informe después de que el consejo revisara las cifras por tercera vez.
Los agricultores de la región cultivan trigo y cebada, y muchas familias también crían algunas vacas.
La nueva ala del museo contiene pinturas, esculturas y una colección de fotografías antiguas de la ciudad.
Cuando llega el frío, los pájaros vuelan hacia el sur y el bosque queda en silencio durante varios meses.
Los ingenieros probaron el puente con cargas pesadas antes de abrirlo al tráfico en la primavera.
La historia muestra que pequeños cambios en el clima han tenido a menudo grandes efectos sobre las cosechas.
Los niños aprendían a leer durante los largos inviernos, y muchos estudiaron después en la universidad.
Un camino estrecho sube del puerto hasta el faro, que todavía guía a los barcos entre las rocas.
El gobierno anunció un nuevo plan para mejorar los ferrocarriles entre la capital y las ciudades del norte.)";

constexpr std::string_view kItalian = R"(Il fiume attraversa la città vecchia e passa sotto il ponte di pietra che fu costruito più di due secoli fa.
Gli scienziati hanno dimostrato che il sonno regolare migliora la memoria, l'attenzione e la capacità di imparare.
La biblioteca apre presto la mattina e resta aperta fino a tarda sera durante l'anno scolastico.
La maggior parte delle case del paese furono costruite in legno e hanno tetti ripidi contro la neve.
Ogni giorno camminava lungo la riva, guardando le barche che tornavano con la marea della sera.
Il comitato decise di pubblicare il rapporto dopo che il consiglio ebbe controllato i numeri per la terza volta.
I contadini della regione coltivano grano e orzo, e molte famiglie allevano anche qualche mucca.
La nuova ala del museo contiene dipinti, sculture e una raccolta di fotografie antiche della città.
Quando arriva il freddo, gli uccelli volano verso sud e il bosco resta in silenzio per molti mesi.
Gli ingegneri provarono il ponte sotto carichi pesanti prima di aprirlo al traffico in primavera.
La storia mostra che piccoli cambiamenti del clima hanno avuto spesso grandi effetti sui raccolti.
I bambini imparavano a leggere durante i lunghi inverni, e molti studiarono poi all'università.
Una strada stretta sale dal porto verso il faro, che guida ancora le navi lontano dagli scogli.
Il governo annunciò un nuovo piano per migliorare le ferrovie tra la capitale e le città del nord.)";

constexpr std::string_view kPortuguese = R"(O rio atravessa a cidade velha e passa sob a ponte de pedra que foi construída há mais de dois séculos.
Os cientistas mostraram que o sono regular melhora a memória, a atenção e a capacidade de aprender.
A biblioteca abre cedo pela manhã e permanece aberta até tarde durante o ano letivo.
A maioria das casas da aldeia foi construída com madeira local e tem telhados inclinados contra a neve.
Ela caminhava todos os dias pela margem, observando os barcos que voltavam com a maré da tarde.
O comité decidiu publicar o relatório depois que o conselho reviu os números pela terceira vez.
Os agricultores da região cultivam trigo e cevada, e muitas famílias também criam algumas vacas.
A nova ala do museu contém pinturas, esculturas e uma coleção de fotografias antigas da cidade.
Quando chega o frio, os pássaros voam para o sul e a floresta fica em silêncio durante vários meses.
Os engenheiros testaram a ponte com cargas pesadas antes de a abrirem ao tráfego na primavera.
A história mostra que pequenas mudanças no clima tiveram muitas vezes grandes efeitos nas colheitas.
As crianças aprendiam a ler durante os longos invernos, e muitas estudaram depois na universidade.
Uma estrada estreita sobe do porto até ao farol, que ainda guia os navios para longe das rochas.
O governo anunciou um novo plano para melhorar os caminhos de ferro entre a capital e o norte.)";

constexpr std::string_view kDutch = R"(De rivier stroomt door de oude stad en onder de stenen brug door die meer dan twee eeuwen geleden werd gebouwd.
Wetenschappers hebben aangetoond dat regelmatige slaap het geheugen en het vermogen om te leren verbetert.
De bibliotheek gaat vroeg in de ochtend open en blijft tijdens het schooljaar tot laat in de avond open.
De meeste huizen in het dorp zijn gebouwd van plaatselijk hout en hebben steile daken tegen de sneeuw.
Ze liep elke dag langs de oever en keek naar de boten die met het avondtij terugkeerden.
De commissie besloot het rapport te publiceren nadat de raad de cijfers voor de derde keer had bekeken.
De boeren in de streek verbouwen tarwe en gerst, en veel gezinnen houden daarnaast enkele koeien.
De nieuwe vleugel van het museum bevat schilderijen, beelden en een verzameling vroege foto's van de stad.
Als het koud wordt, vliegen de vogels naar het zuiden en wordt het bos maandenlang stil.
De ingenieurs testten de brug onder zware belasting voordat ze in het voorjaar voor verkeer werd geopend.
De geschiedenis laat zien dat kleine veranderingen in het klimaat vaak grote gevolgen hadden voor de oogst.
De kinderen leerden lezen tijdens de lange winters, en velen studeerden later aan de universiteit.
Een smalle weg klimt van de haven naar de vuurtoren, die de schepen nog steeds langs de rotsen leidt.
De regering kondigde een nieuw plan aan om de spoorwegen tussen de hoofdstad en het noorden te verbeteren.)";

}  // namespace

const std::vector<std::pair<std::string, std::string_view>>&
bundled_language_seed_corpus() {
    static const std::vector<std::pair<std::string, std::string_view>> corpus =
        {
            {"de", kGerman},  {"en", kEnglish},    {"es", kSpanish},
            {"fr", kFrench},  {"it", kItalian},    {"nl", kDutch},
            {"pt", kPortuguese},
        };
    return corpus;
}

}  // namespace curator
